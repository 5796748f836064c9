"""Machine-readable catalog of one-generated nilpotent terminal algebras
and the verification harness replaying the classification pipeline."""

from importlib import resources

from .model import Catalog, CatalogEntry, DerivationEntry, OrbitRep, entry_sample_bindings, sample_bindings
from .parser import parse_catalog, write_catalog
from .verify import VerificationReport, nonisomorphism_sweep, verify_all, verify_derivation, verify_entry

_BUILTIN = None


def builtin_text() -> str:
    return resources.files(__package__).joinpath("data/terminal.cat").read_text()


def load_builtin() -> Catalog:
    global _BUILTIN
    if _BUILTIN is None:
        _BUILTIN = parse_catalog(builtin_text())
    return _BUILTIN


__all__ = [
    "Catalog",
    "CatalogEntry",
    "DerivationEntry",
    "OrbitRep",
    "VerificationReport",
    "builtin_text",
    "entry_sample_bindings",
    "load_builtin",
    "nonisomorphism_sweep",
    "parse_catalog",
    "sample_bindings",
    "verify_all",
    "verify_derivation",
    "verify_entry",
    "write_catalog",
]
