"""Permutation polynomials over finite fields: construction, bijectivity
through commuting squares, and compositional inverses checked by brute force."""

from .squares import (
    Diagram,
    MapTable,
    MultiDiagram,
    square_criterion,
    dual_diagram,
    generalized_inverse,
    induced_psi,
    multi_diagram_inverse,
)
from .errors import (
    CeilingExceeded,
    DiagramError,
    InputError,
    NotBijectiveError,
    PPForgeError,
    VerificationError,
)
from .field import (
    FieldCtx,
    TowerCtx,
    build_field,
    parse_field_spec,
    primitive_root_of_unity,
    subfield_elements,
    trace,
)
from .polyfun import (
    FuncTable,
    Poly,
    brute_inverse,
    compose,
    interpolate,
    is_involution,
    is_permutation,
    to_table,
)

__version__ = "0.1.0"
