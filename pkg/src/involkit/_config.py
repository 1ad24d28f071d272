"""Enumeration limits shared by the oracle routines."""
import os

DEFAULT_CENSUS_CAP = 11
# q**(n*n) bound for the product-closure oracles
DEFAULT_SPACE_CAP = 2 * 10**7
MAX_FIELD_SIZE = 2**20


class CapExceededError(RuntimeError):
    """An enumeration was requested outside the configured limits."""


_state = {"census_cap": None, "space_cap": DEFAULT_SPACE_CAP}


def census_cap() -> int:
    if _state["census_cap"] is not None:
        return _state["census_cap"]
    env = os.environ.get("INVOLKIT_CAP")
    if env:
        return int(env)
    return DEFAULT_CENSUS_CAP


def set_census_cap(value: int | None) -> int | None:
    """Override the census cap (``None`` restores the default); returns the old override."""
    previous = _state["census_cap"]
    _state["census_cap"] = value
    return previous


def space_cap() -> int:
    return _state["space_cap"]


def set_space_cap(value: int) -> None:
    _state["space_cap"] = value


def check_census(q: int, n: int | None = None, what: str = "enumeration") -> None:
    cap = census_cap()
    if q > cap:
        raise CapExceededError(f"{what}: field size {q} exceeds census cap {cap}")
    if n is not None and q ** (n * n) > space_cap():
        raise CapExceededError(
            f"{what}: {q}^{n * n} matrices exceeds space cap {space_cap()}")
