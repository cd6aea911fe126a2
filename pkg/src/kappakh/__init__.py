"""The kappa invariant of braid closures: the filtration level, in annular
Khovanov homology over GF(2), at which the transverse element bounds."""

from .braid import (
    BasepointAddress,
    BraidWord,
    conjugate,
    exponent_sum,
    flype_pair,
    mirror,
    parse_braid,
    self_linking,
    stabilize,
)
from .complex import build_slice, differential
from .diagram import Generator, Resolution, circles, gradings, oriented_resolution
from .invariants import (
    INFINITY,
    KappaResult,
    certify_right_veering,
    kappa,
    negative_destab_obstruction,
    psi,
    psi_death_page,
    skh_dims,
    ss_page_dim,
    word_problem,
)

__version__ = "0.1.0"
