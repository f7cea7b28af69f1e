"""Computational companion for p-valuations on nilpotent pro-p groups and
filtrations on their group algebras over F_p."""

from .padic import (INFINITY, BoundedVal, IndeterminateComparison, InsufficientPrecision,
                    MatrixZp, NotAUnit, PAdicInt, ValueQ, binom_mod_p, min_nonzero_binom,
                    unit_inverse, vp)
from .nilgroup import (CATALOGUE, GroupElement, GroupSpec, abelian, collect_mul, commutator,
                       coords_mod, heisenberg, inverse, project, unipotent, zp_power)
from .pval import (GradedGroupSymbol, IdentityElement, InvalidT, NoCertificate, PValuation, act,
                   check_axioms, check_omega_L, evaluate, graded_symbol_group, inf_lift,
                   nice_omega, orbit_inf, quotient_pval, tp_filtration)
from .groupalg import (AlgebraElement, BSeries, FiniteField, StandardForm, ValueBeyondCutoff,
                       alg_mul, expand_b_form, f_value, graded_symbol_alg, standard_form, w_value)
from .autos import (Automorphism, NotBijective, RelationViolation, SubgroupNotPreserved,
                    apply_to_algebra, check_condition_1_1, check_f_increase, check_moves_up,
                    in_gamma1, induced_matrix, make_automorphism, random_automorphism)

__all__ = [name for name in dir() if not name.startswith("_")]
