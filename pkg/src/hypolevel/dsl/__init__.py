from hypolevel.dsl.ast import (
    Aut,
    BinOp,
    Blaschke,
    Compose,
    Const,
    Identity,
    MapExpr,
    Neg,
    Pow,
    Var,
    eval_jet,
    unparse,
)
from hypolevel.dsl.blaschke import (
    BlaschkeData,
    UnsupportedMap,
    as_blaschke,
    blaschke_boundary_derivative,
    sup_derivative,
)
from hypolevel.dsl.jet import EvalError, Jet2
from hypolevel.dsl.parser import (
    ArityError,
    DomainError,
    MapSyntaxError,
    ParseError,
    UnknownIdentifier,
    parse,
)
from hypolevel.dsl.validate import SelfMapValidation, validate_self_map


def load_map(text: str, **kwargs) -> MapExpr:
    """Parse and validate; raises InvalidSelfMap when the map is not a self-map."""
    from hypolevel.hyp_core import InvalidSelfMap

    f = parse(text)
    v = validate_self_map(f, **kwargs)
    if not v.valid:
        raise InvalidSelfMap(f"{text!r} is not a self-map of the disk ({v.reason})")
    return f
