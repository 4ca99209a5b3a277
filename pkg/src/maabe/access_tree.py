"""Threshold-gate access trees: sharing, satisfaction, reconstruction.

A tree is either a leaf carrying an attribute or an n-of-m gate over an
ordered child list.  Every node x has an implicit polynomial p_x of
degree n - 1 with p_x(0) the node's secret; the j-th child (1-indexed,
left to right) receives p_x(j).  Reconstruction walks bottom-up, taking
at each gate the lexicographically smallest satisfied child-index set of
size n and combining with Lagrange coefficients evaluated at 0.

The flat d-of-n threshold used by per-authority key shares is the
single-gate special case.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import PolicyNotSatisfied, TreeStructureError


@dataclass(frozen=True, order=True)
class AttributeId:
    """Attribute (k, i): the i-th attribute managed by authority k."""

    authority: int
    attribute: int

    def __post_init__(self):
        if self.authority < 1 or self.attribute < 1:
            raise ValueError("authority and attribute indices are 1-based")

    def __str__(self):
        return f"{self.authority}:{self.attribute}"

    @classmethod
    def parse(cls, text: str) -> "AttributeId":
        k, _, i = text.partition(":")
        try:
            return cls(int(k), int(i))
        except ValueError:
            raise ValueError(f"malformed attribute id {text!r}, expected 'k:i'") from None


@dataclass(frozen=True)
class AccessLeaf:
    attribute: AttributeId


@dataclass(frozen=True)
class AccessGate:
    threshold: int
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise TreeStructureError("gate with no children")
        if not 1 <= self.threshold <= len(self.children):
            raise TreeStructureError(
                f"threshold {self.threshold} out of range for {len(self.children)} children"
            )


AccessNode = AccessLeaf | AccessGate


def leaves(tree: AccessNode) -> list[AccessLeaf]:
    """All leaves in left-to-right order."""
    if isinstance(tree, AccessLeaf):
        return [tree]
    out = []
    for child in tree.children:
        out.extend(leaves(child))
    return out


def leaf_attributes(tree: AccessNode) -> list[AttributeId]:
    return [leaf.attribute for leaf in leaves(tree)]


def validate_tree(tree: AccessNode) -> None:
    """Structural check: gate invariants (enforced at construction) plus
    leaf-attribute distinctness across the whole tree."""
    attrs = leaf_attributes(tree)
    if len(set(attrs)) != len(attrs):
        raise TreeStructureError("duplicate leaf attributes within one tree")


def satisfies(tree: AccessNode, attrs) -> bool:
    """True iff >= threshold children are satisfied at every gate on some
    witness assignment; a leaf is satisfied iff its attribute is present."""
    if isinstance(tree, AccessLeaf):
        return tree.attribute in attrs
    count = 0
    for child in tree.children:
        if satisfies(child, attrs):
            count += 1
            if count >= tree.threshold:
                return True
    return False


def share_secret(tree: AccessNode, secret: int, p: int, rng) -> dict[AttributeId, int]:
    """Split ``secret`` over the tree: the root polynomial has p(0) = secret
    and threshold - 1 uniformly random higher coefficients; leaves collect
    their received evaluations."""
    validate_tree(tree)
    shares: dict[AttributeId, int] = {}

    def descend(node: AccessNode, value: int):
        if isinstance(node, AccessLeaf):
            shares[node.attribute] = value
            return
        coeffs = [value] + [rng.randrange(0, p) for _ in range(node.threshold - 1)]
        for index, child in enumerate(node.children, start=1):
            acc = 0
            for coeff in reversed(coeffs):
                acc = (acc * index + coeff) % p
            descend(child, acc)

    descend(tree, secret % p)
    return shares


def lagrange_coefficient(i: int, points, p: int) -> int:
    """Interpolation weight at 0: prod_{j in S, j != i} (0 - j) / (i - j) mod p."""
    points = list(points)
    if len(set(points)) != len(points):
        raise ValueError("duplicate interpolation points")
    if i not in points:
        raise ValueError("i must be one of the interpolation points")
    if any(j % p == 0 for j in points):
        raise ValueError("interpolation points must be nonzero mod p")
    num, den = 1, 1
    for j in points:
        if j == i:
            continue
        num = num * (-j) % p
        den = den * (i - j) % p
    return num * pow(den, -1, p) % p


def selected_leaves(tree: AccessNode, attrs) -> list[AttributeId]:
    """Leaf attributes used by reconstruction: at each satisfied gate the
    lexicographically smallest set of ``threshold`` satisfied child indexes."""
    if not satisfies(tree, attrs):
        raise PolicyNotSatisfied("attribute set does not satisfy the access tree")

    def collect(node: AccessNode) -> list[AttributeId]:
        if isinstance(node, AccessLeaf):
            return [node.attribute]
        chosen = [
            j for j, child in enumerate(node.children, start=1) if satisfies(child, attrs)
        ][: node.threshold]
        out = []
        for j in chosen:
            out.extend(collect(node.children[j - 1]))
        return out

    return collect(tree)


def reconstruct_in_target(tree: AccessNode, leaf_values: Mapping[AttributeId, object], attrs):
    """Combine per-leaf target-group values e(g,g2)^(share*s) bottom-up into
    e(g,g2)^(p_root(0)*s).  ``leaf_values`` must cover the selection returned
    by selected_leaves(tree, attrs)."""
    if not satisfies(tree, attrs):
        raise PolicyNotSatisfied("attribute set does not satisfy the access tree")

    def value_of(node: AccessNode):
        if isinstance(node, AccessLeaf):
            return leaf_values[node.attribute]
        chosen = [
            j for j, child in enumerate(node.children, start=1) if satisfies(child, attrs)
        ][: node.threshold]
        acc = None
        for j in chosen:
            child_value = value_of(node.children[j - 1])
            p = child_value.group.order
            term = child_value ** lagrange_coefficient(j, chosen, p)
            acc = term if acc is None else acc * term
        return acc

    return value_of(tree)


# ---------------------------------------------------------------------------
# text format: (2of3 (leaf 1:4) (leaf 1:7) (1of2 (leaf 2:1) (leaf 2:2)))
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_GATE = re.compile(r"^(\d+)of(\d+)$")


def parse_tree(text: str) -> AccessNode:
    """Parse the s-expression tree format; rejects thresholds exceeding arity."""
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise TreeStructureError("empty tree expression")
    pos = 0

    def next_token() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise TreeStructureError("unexpected end of tree expression")
        token = tokens[pos]
        pos += 1
        return token

    def parse_node() -> AccessNode:
        token = next_token()
        if token != "(":
            raise TreeStructureError(f"expected '(' but found {token!r}")
        head = next_token()
        if head == "leaf":
            attr = AttributeId.parse(next_token())
            if next_token() != ")":
                raise TreeStructureError("leaf takes exactly one attribute")
            return AccessLeaf(attr)
        match = _GATE.match(head)
        if not match:
            raise TreeStructureError(f"unknown node kind {head!r}")
        threshold, arity = int(match.group(1)), int(match.group(2))
        children = []
        while pos < len(tokens) and tokens[pos] == "(":
            children.append(parse_node())
        if next_token() != ")":
            raise TreeStructureError("unterminated gate")
        if len(children) != arity:
            raise TreeStructureError(
                f"gate declared {arity} children but has {len(children)}"
            )
        return AccessGate(threshold, tuple(children))

    tree = parse_node()
    if pos != len(tokens):
        raise TreeStructureError("trailing tokens after tree expression")
    validate_tree(tree)
    return tree


def format_tree(tree: AccessNode) -> str:
    if isinstance(tree, AccessLeaf):
        return f"(leaf {tree.attribute})"
    inner = " ".join(format_tree(child) for child in tree.children)
    return f"({tree.threshold}of{len(tree.children)} {inner})"
