"""Finite trajectory trees, node addressing and numeric modes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from .extreal import Number, is_finite, parse_ext

NodePath = Tuple[int, ...]
ROOT: NodePath = ()


class InvalidPathError(ValueError):
    """Raised when a node path does not address a node of the tree."""


@dataclass(frozen=True)
class NumericMode:
    """Exact rational arithmetic or floats with a zero band ``eps``."""

    exact: bool = True
    eps: float = 1e-9

    @property
    def name(self) -> str:
        return "exact" if self.exact else "float"

    def coerce(self, x: Union[str, Number]) -> Number:
        return parse_ext(x, exact=self.exact)

    def tol(self) -> Number:
        return 0 if self.exact else self.eps

    def is_zero(self, x: Number) -> bool:
        if self.exact:
            return x == 0
        return is_finite(x) and abs(x) <= self.eps

    def sign(self, x: Number) -> int:
        if self.is_zero(x):
            return 0
        return 1 if x > 0 else -1

    def leq(self, a: Number, b: Number) -> bool:
        """``a <= b`` up to the tolerance."""
        if a == b or a <= b:
            return True
        if self.exact or not (is_finite(a) and is_finite(b)):
            return False
        return a - b <= self.eps * max(1.0, abs(a), abs(b))

    def close(self, a: Number, b: Number) -> bool:
        return self.leq(a, b) and self.leq(b, a)


EXACT = NumericMode(True)
FLOAT = NumericMode(False)


@dataclass(frozen=True)
class Node:
    """A tree node: a price and its one-step continuations."""

    value: Number
    children: Tuple["Node", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


def parse_path(text: Union[str, Sequence[int], None]) -> NodePath:
    """Parse ``"root"``, ``""`` or ``"0.1.2"`` / ``"0,1,2"`` into a node path."""
    if text is None:
        return ROOT
    if not isinstance(text, str):
        return tuple(int(i) for i in text)
    s = text.strip().lower()
    if s in ("", "root", "()", "[]"):
        return ROOT
    s = s.strip("[]()")
    parts = s.replace(",", ".").split(".")
    try:
        return tuple(int(p) for p in parts if p.strip() != "")
    except ValueError as exc:
        raise InvalidPathError(f"bad node path {text!r}") from exc


def format_path(path: NodePath) -> str:
    return "root" if not path else ".".join(str(i) for i in path)


@dataclass(frozen=True)
class TrajectoryTree:
    """A finite rooted tree of prices whose leaves all sit at depth ``horizon``.

    Leaves are the (truncated) trajectories.  A node is addressed by the tuple
    of child indices leading to it from the root.
    """

    root: Node
    horizon: int
    mode: NumericMode = EXACT
    _index: Dict[NodePath, Node] = field(init=False, repr=False, compare=False)
    _leaves: Tuple[NodePath, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise ValueError("horizon must be nonnegative")
        root = _coerce_node(self.root, self.mode)
        object.__setattr__(self, "root", root)
        index: Dict[NodePath, Node] = {}
        leaves: List[NodePath] = []
        stack: List[Tuple[NodePath, Node]] = [((), root)]
        while stack:
            path, node = stack.pop()
            index[path] = node
            if node.is_leaf:
                if len(path) != self.horizon:
                    raise ValueError(
                        f"leaf {format_path(path)} at depth {len(path)}, expected {self.horizon}"
                    )
                leaves.append(path)
            else:
                if len(path) >= self.horizon:
                    raise ValueError(f"node {format_path(path)} extends past the horizon")
                for i in range(len(node.children) - 1, -1, -1):
                    stack.append((path + (i,), node.children[i]))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_leaves", tuple(leaves))

    # construction helpers

    @classmethod
    def from_dict(cls, data: dict, mode: NumericMode = EXACT) -> "TrajectoryTree":
        """Build from ``{"value": v, "children": [...]}`` nested dictionaries."""

        def build(d: dict, where: str) -> Node:
            if not isinstance(d, dict) or "value" not in d:
                raise ValueError(f"{where}: node must be an object with a 'value' field")
            kids = d.get("children", []) or []
            if not isinstance(kids, list):
                raise ValueError(f"{where}: 'children' must be a list")
            return Node(
                mode.coerce(d["value"]),
                tuple(build(c, f"{where}.children[{i}]") for i, c in enumerate(kids)),
            )

        root = build(data, "tree")
        horizon = _depth(root)
        return cls(root, horizon, mode)

    def to_dict(self) -> dict:
        from .extreal import to_jsonable

        def dump(n: Node) -> dict:
            out: dict = {"value": to_jsonable(n.value)}
            if n.children:
                out["children"] = [dump(c) for c in n.children]
            return out

        return dump(self.root)

    def with_mode(self, mode: NumericMode) -> "TrajectoryTree":
        if mode == self.mode:
            return self
        return TrajectoryTree(_coerce_node(self.root, mode), self.horizon, mode)

    # addressing

    @property
    def s0(self) -> Number:
        return self.root.value

    def node(self, path: Sequence[int]) -> Node:
        try:
            return self._index[tuple(path)]
        except KeyError:
            raise InvalidPathError(f"no node at {format_path(tuple(path))}") from None

    def has(self, path: Sequence[int]) -> bool:
        return tuple(path) in self._index

    def value(self, path: Sequence[int]) -> Number:
        return self.node(path).value

    def children(self, path: Sequence[int]) -> List[NodePath]:
        p = tuple(path)
        return [p + (i,) for i in range(len(self.node(p).children))]

    def increments(self, path: Sequence[int]) -> List[Number]:
        n = self.node(path)
        return [c.value - n.value for c in n.children]

    def is_leaf(self, path: Sequence[int]) -> bool:
        return self.node(path).is_leaf

    @property
    def all_leaves(self) -> Tuple[NodePath, ...]:
        return self._leaves

    def leaves(self, prefix: Sequence[int] = ROOT) -> List[NodePath]:
        """Leaves extending ``prefix``: the conditional space of that node."""
        p = tuple(prefix)
        self.node(p)
        k = len(p)
        return [leaf for leaf in self._leaves if leaf[:k] == p]

    def price_path(self, leaf: Sequence[int]) -> List[Number]:
        """Prices ``S_0, ..., S_j`` along the path to ``leaf``."""
        leaf = tuple(leaf)
        self.node(leaf)
        out = [self.root.value]
        node = self.root
        for i in leaf:
            node = node.children[i]
            out.append(node.value)
        return out

    def nodes(self) -> Iterator[NodePath]:
        """All node paths, in depth-first preorder."""
        return iter(sorted(self._index, key=lambda p: (p,)))

    def at_depth(self, depth: int) -> List[NodePath]:
        return sorted(p for p in self._index if len(p) == depth)

    def interior(self, below: Sequence[int] = ROOT) -> List[NodePath]:
        b = tuple(below)
        k = len(b)
        return sorted(
            p for p, n in self._index.items() if not n.is_leaf and p[:k] == b
        )

    def subtree(self, below: Sequence[int] = ROOT) -> List[NodePath]:
        b = tuple(below)
        k = len(b)
        return sorted(p for p in self._index if p[:k] == b)

    def __len__(self) -> int:
        return len(self._index)


def conditional_leaves(tree: TrajectoryTree, node: Sequence[int]) -> List[NodePath]:
    """Leaves of ``tree`` whose path extends ``node``."""
    return tree.leaves(node)


def _depth(node: Node) -> int:
    if node.is_leaf:
        return 0
    depths = {_depth(c) for c in node.children}
    if len(depths) != 1:
        raise ValueError("leaves must all lie at the same depth")
    return depths.pop() + 1


def _coerce_node(node: Node, mode: NumericMode) -> Node:
    value = mode.coerce(node.value)
    if not is_finite(value):
        raise ValueError("prices must be finite")
    kids = tuple(_coerce_node(c, mode) for c in node.children)
    if value is node.value and all(a is b for a, b in zip(kids, node.children)):
        return node
    return Node(value, kids)


def make_tree(
    nested: Union[Number, tuple, list],
    mode: NumericMode = EXACT,
) -> TrajectoryTree:
    """Build a tree from nested ``(value, [children...])`` tuples.

    A bare number is a leaf.  Convenient for tests and small hand-built models.
    """

    def build(s) -> Node:
        if isinstance(s, (tuple, list)):
            value, kids = s
            return Node(mode.coerce(value), tuple(build(k) for k in kids))
        return Node(mode.coerce(s))

    root = build(nested)
    return TrajectoryTree(root, _depth(root), mode)


def one_step(s0: Number, children: Sequence[Number], mode: NumericMode = EXACT) -> TrajectoryTree:
    return make_tree((s0, list(children)), mode)


__all__ = [
    "EXACT",
    "FLOAT",
    "InvalidPathError",
    "Node",
    "NodePath",
    "NumericMode",
    "ROOT",
    "TrajectoryTree",
    "conditional_leaves",
    "format_path",
    "make_tree",
    "one_step",
    "parse_path",
]

