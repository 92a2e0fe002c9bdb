"""Lookups over the fixtures shipped with the package."""
from rswork.cli import list_fixtures, load
from rswork.rsem import validate_axioms


def bundled_semigroups(restriction_only=False):
    out = []
    for f in list_fixtures():
        ws = load(f["name"])
        for n in ws.names("semigroup"):
            S = ws.semigroup(n)
            if not restriction_only or validate_axioms(S).restriction:
                out.append((n, S))
    return out


def bundled_categories():
    """(name, category) for every bundled category; graphs use their default window."""
    out = []
    for f in list_fixtures():
        ws = load(f["name"])
        for n in ws.names("category"):
            out.append((n, ws.category(n)))
    return out
