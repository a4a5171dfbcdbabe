"""Generalized SIRS model toolkit (C++ core)."""

from ._core import (
    Family,
    Method,
    ModelParams,
    State,
    IncidenceFunction,
    make_builtin,
    check_hypotheses,
    compute_beta,
    check_lemma1_bound,
    vector_field,
    dfe,
    r0,
    in_omega,
    line_q1,
    find_endemic,
    verify_equilibrium,
    check_a1,
    big_g,
    check_a2,
    find_k1,
    lyapunov_v,
    dvdt_scan,
    pq_matrices,
    dfe_lyapunov_bound,
    certify,
    integrate,
    sweep,
    omega_lattice,
    conservation_check,
    __version__,
)

__all__ = [name for name in dir() if not name.startswith("_")]
