"""Attribute authorities: per-attribute exponents and blinded key shares.

Authority k holds a PRF seed se_k and exponents t_{k,i} in Z_p* for its
attribute universe, publishing T_{k,i} = g^t_{k,i}.  For user u it
derives y_{k,u} = F_{se_k}(u), splits it over the user's access tree and
issues

    D_{k,i} = g2^(share(i) / t_{k,i})

so that e(T_{k,i}^s, D_{k,i}) = e(g, g2)^(share(i) * s) during
decryption.  The authority keeps no per-user state: y_{k,u} is
re-derivable from the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .access_tree import AccessNode, AttributeId, leaf_attributes, share_secret
from .errors import JurisdictionError, UnknownAttributeError
from .groups import SourceElement
from .hashing import CTX_PRF, keyed_scalar

SEED_BYTES = 32


@dataclass
class AuthoritySecret:
    index: int
    seed: bytes
    attr_exponents: dict[int, int]  # i -> t_{k,i}


@dataclass
class AuthorityPublic:
    index: int
    attr_keys: dict[int, SourceElement]  # i -> T_{k,i} = g^t_{k,i}


@dataclass
class AttributeKeyShare:
    """One authority's contribution to a user key: D_{k,i} plus the tree
    the shares were split over (needed again at reconstruction time)."""

    authority: int
    shares: dict[AttributeId, SourceElement]
    tree: AccessNode


def authority_setup(group, index: int, attribute_count: int, rng):
    """Fresh seed and exponents for authority ``index`` over attributes 1..N."""
    if attribute_count < 1:
        raise ValueError("attribute_count must be >= 1")
    seed = rng.getrandbits(8 * SEED_BYTES).to_bytes(SEED_BYTES, "big")
    exponents = {i: group.random_scalar(rng) for i in range(1, attribute_count + 1)}
    public = AuthorityPublic(
        index=index,
        attr_keys={i: group.generator ** t for i, t in exponents.items()},
    )
    return AuthoritySecret(index=index, seed=seed, attr_exponents=exponents), public


def prf_eval(group, seed: bytes, user_id: str) -> int:
    """y_{k,u} = F_{se_k}(u): keyed hash of the identity into Z_p*."""
    return keyed_scalar(seed, CTX_PRF, user_id.encode("utf-8"), group.order)


def issue_attribute_keys(mpk, secret: AuthoritySecret, user_id: str, tree: AccessNode, rng) -> AttributeKeyShare:
    """Split y_{k,u} over ``tree`` and publish D_{k,i} = g2^(share/t_{k,i})."""
    for attr in leaf_attributes(tree):
        if attr.authority != secret.index:
            raise JurisdictionError(
                f"authority {secret.index} cannot issue for attribute {attr}"
            )
        if attr.attribute not in secret.attr_exponents:
            raise UnknownAttributeError(f"attribute {attr} outside the registered universe")
    p = mpk.group.order
    y_ku = prf_eval(mpk.group, secret.seed, user_id)
    shares = share_secret(tree, y_ku, p, rng)
    issued = {
        attr: mpk.g2 ** (value * pow(secret.attr_exponents[attr.attribute], -1, p) % p)
        for attr, value in shares.items()
    }
    return AttributeKeyShare(authority=secret.index, shares=issued, tree=tree)
