"""Finite and numeric laboratory for gyrogroups and finite topological gyrogroups."""

from .core import (
    EXHAUSTIVE, FiniteGyrogroup, Gyrogroup, Mode, check_axioms, check_homomorphism,
    check_identities, derived_gyr, gyr, is_group, sampled,
)
from .models import (
    EinsteinBall, EinsteinVector, MobiusDisk, MobiusPoint, ProductGyrogroup, builtin, cyclic,
    dump_table, einstein_add, g8, gamma, group_as_gyrogroup, k16, klein, load_table, mobius_add,
    mobius_gyr, nonassoc_witness, product, tabulate,
)
from .report import BoundExceeded, Check, DomainError, PreconditionError, Verdict, VerificationReport

__version__ = "0.1.0"
