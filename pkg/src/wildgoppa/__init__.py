"""Cryptanalysis workbench for wild McEliece keys over quadratic extensions."""
from .algcode import WildKeyPair, alternant, decode, encrypt, goppa, grs, keygen
from .attack import AttackResult, AttackTranscript, RecoveredKey, run_attack
from .code import LinearCode, code_sum, conductor, dual, intersect, puncture, shorten, square, star_product
from .distinguisher import distinguish, feasibility_table
from .field import FieldTower, FiniteField, Poly
from .filtration import FiltrationState, climb_to, coi_oracle, next_term, seed_filtration

__all__ = [
    "WildKeyPair", "alternant", "decode", "encrypt", "goppa", "grs", "keygen",
    "AttackResult", "AttackTranscript", "RecoveredKey", "run_attack",
    "LinearCode", "code_sum", "conductor", "dual", "intersect", "puncture", "shorten", "square", "star_product",
    "distinguish", "feasibility_table",
    "FieldTower", "FiniteField", "Poly",
    "FiltrationState", "climb_to", "coi_oracle", "next_term", "seed_filtration",
]

__version__ = "0.1.0"
