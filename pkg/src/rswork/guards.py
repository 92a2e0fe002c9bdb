"""Size guards. Set RSWORK_GUARD_OVERRIDE=1 to lift them."""
import os

from .errors import GuardError

MAX_SEMIGROUP = 4096
MAX_CHARACTER_E = 24
MAX_BRUTE_FORCE_E = 16
MAX_COVER_DOWNSET = 16
MAX_BISECTION_MORPHISMS = 20
MAX_RECONSTRUCTION_MORPHISMS = 12
MAX_FOCK_DIM = 1_000_000

ENV_VAR = "RSWORK_GUARD_OVERRIDE"


def overridden():
    return os.environ.get(ENV_VAR, "").strip().lower() in {"1", "true", "yes", "on"}


def check(what, size, limit):
    if size > limit and not overridden():
        raise GuardError(
            f"{what} has size {size}, above the limit {limit}; set {ENV_VAR}=1 to force",
            what=what, size=size, limit=limit,
        )
