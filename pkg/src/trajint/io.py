"""JSON file formats for models, payoffs, portfolios, certificates and processes."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .elementary import ElementaryFunction
from .extreal import to_jsonable
from .payoff import Payoff, abs_increment, call, constant, increment, indicator, put, table, terminal
from .superhedge import HedgeCertificate
from .tree import EXACT, NumericMode, TrajectoryTree, parse_path

PathLike = Union[str, Path]


class InputError(ValueError):
    """Malformed input file or specifier."""


def _loads(text: str, mode: NumericMode, where: str) -> Any:
    kwargs = {"parse_float": Fraction} if mode.exact else {}
    try:
        return json.loads(text, **kwargs)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _read(path: PathLike) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def model_to_dict(tree: TrajectoryTree) -> dict:
    return {"s0": to_jsonable(tree.s0), "horizon": tree.horizon, "tree": tree.to_dict()}


def model_from_dict(data: Any, mode: NumericMode = EXACT, where: str = "model") -> TrajectoryTree:
    if not isinstance(data, dict):
        raise InputError(f"{where}: top level must be an object")
    for key in ("s0", "horizon", "tree"):
        if key not in data:
            raise InputError(f"{where}: missing field {key!r}")
    try:
        tree = TrajectoryTree.from_dict(data["tree"], mode)
        s0 = mode.coerce(data["s0"])
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None
    horizon = data["horizon"]
    if not isinstance(horizon, (int, Fraction)) or int(horizon) != horizon:
        raise InputError(f"{where}: field 'horizon' must be an integer")
    if tree.horizon != int(horizon):
        raise InputError(f"{where}: field 'horizon' is {horizon} but leaves sit at depth {tree.horizon}")
    if s0 != tree.s0:
        raise InputError(f"{where}: field 's0' is {data['s0']} but the root value is {tree.s0}")
    return tree


def load_model(path: PathLike, mode: NumericMode = EXACT) -> TrajectoryTree:
    return model_from_dict(_loads(_read(path), mode, str(path)), mode, str(path))


def dump_model(tree: TrajectoryTree) -> str:
    return json.dumps(model_to_dict(tree), indent=1)


def save_model(tree: TrajectoryTree, path: PathLike) -> None:
    Path(path).write_text(dump_model(tree) + "\n")


def _load_ref(ref: str, mode: NumericMode) -> Any:
    if not ref.startswith("@"):
        raise InputError(f"expected @file, got {ref!r}")
    return _loads(_read(ref[1:]), mode, ref[1:])


def parse_leaf_list(data: Any, where: str = "leaves") -> List[tuple]:
    if not isinstance(data, list):
        raise InputError(f"{where}: expected a list of node paths")
    return [parse_path(x) for x in data]


def parse_payoff(text: str, mode: NumericMode = EXACT) -> Payoff:
    """Parse ``call:K``, ``put:K``, ``const:c``, ``terminal``, ``absinc:i``,
    ``inc:i``, ``indicator:@file`` or ``table:@file``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "terminal":
            return terminal()
        if kind in ("const", "constant"):
            return constant(mode.coerce(arg))
        if kind == "call":
            return call(mode.coerce(arg))
        if kind == "put":
            return put(mode.coerce(arg))
        if kind in ("absinc", "abs_increment"):
            return abs_increment(int(arg))
        if kind in ("inc", "increment"):
            return increment(int(arg))
        if kind == "indicator":
            return indicator(parse_leaf_list(_load_ref(arg, mode), arg))
        if kind == "table":
            data = _load_ref(arg, mode)
            if isinstance(data, dict):
                return table({parse_path(k): mode.coerce(v) for k, v in data.items()})
            if isinstance(data, list):
                return table({parse_path(e["leaf"]): mode.coerce(e["value"]) for e in data})
            raise InputError(f"{arg}: table must be an object or a list of entries")
    except InputError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad payoff specifier {text!r}: {exc}") from None
    raise InputError(f"unknown payoff kind in {text!r}")


def portfolio_to_dict(p: ElementaryFunction) -> dict:
    return {
        "start": p.start,
        "node": list(p.node),
        "V": to_jsonable(p.V),
        "maturity": p.maturity,
        "H": [{"node": list(k), "h": to_jsonable(v)} for k, v in sorted(p.holdings.items())],
    }


def portfolio_from_dict(data: Any, mode: NumericMode = EXACT, where: str = "portfolio") -> ElementaryFunction:
    try:
        node = parse_path(data.get("node", []))
        if "start" in data and int(data["start"]) != len(node):
            raise InputError(f"{where}: 'start' does not match the node depth")
        hold = {parse_path(e["node"]): mode.coerce(e["h"]) for e in data.get("H", [])}
        return ElementaryFunction(node, mode.coerce(data["V"]), hold, data.get("maturity"))
    except InputError:
        raise
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def load_portfolio(path: PathLike, mode: NumericMode = EXACT) -> ElementaryFunction:
    return portfolio_from_dict(_loads(_read(path), mode, str(path)), mode, str(path))


def certificate_to_dict(c: HedgeCertificate) -> dict:
    return {
        "node": list(c.node),
        "value": to_jsonable(c.value),
        "total_premium": to_jsonable(c.total_premium),
        "slack": to_jsonable(c.slack),
        "elements": [portfolio_to_dict(e) for e in c.elements],
    }


def certificate_from_dict(data: dict, mode: NumericMode = EXACT) -> HedgeCertificate:
    return HedgeCertificate(
        parse_path(data["node"]),
        tuple(portfolio_from_dict(e, mode) for e in data["elements"]),
        mode.coerce(data["total_premium"]),
        mode.coerce(data["value"]),
        mode.coerce(data["slack"]),
    )


def process_to_dict(values: Dict[tuple, Any], mode: str, payoff: str = "") -> dict:
    return {
        "mode": mode,
        "payoff": payoff,
        "values": [{"node": list(k), "value": to_jsonable(v)} for k, v in sorted(values.items())],
    }


def write_json(obj: Any, path: Optional[PathLike]) -> str:
    text = json.dumps(obj, indent=1)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
