"""Executable GH-algebra models: symmetric matrices, functions on finite spaces,
projection lattices, states, observables and the continuous functional calculus."""
from .commutative_model import CharElement, DiscreteSpace, FnElement
from .eigen import BACKEND, EigenSystem, eigensystem, jacobi_eigh
from .errors import DiagnosticError, DomainError, InputError, NotInvertibleError, SynapticError
from .funcalc import (
    RealFunction,
    func_calc_eigen,
    func_calc_poly,
    func_calc_rs,
    parse_function,
    pushforward_resolution,
    spectral_mapping,
)
from .loomis_sikorski import GroundSet, QuotientMorphism, apply_h, is_regular, state_integral, tribe_generate
from .matrix_model import (
    Projection,
    SpectralResolution,
    SpectrumSet,
    SymMatrix,
    abs_pos_neg,
    carrier,
    commutes,
    invert,
    jordan_product,
    leq,
    order_unit_norm,
    quadratic_map,
    spectral_resolution,
    spectrum,
    sqrt_psd,
)
from .projection_lattice import complement, join, mackey_compatible, meet, orthogonal
from .states import BorelSetExpr, Observable, State, distribution, evaluate, expectation, measure_apply, observable_of

__version__ = "0.1.0"
