"""Random instances, equations, programs and algebra expressions for the
property tests and the equivalence harness."""
from __future__ import annotations

import random
from typing import Dict, List, Mapping, Optional, Sequence

from .core import Instance, Pack, Var

ALPHABET = ("a", "b", "c")


def random_path(rng: random.Random, alphabet: Sequence[str] = ALPHABET, max_len: int = 5,
                pack_prob: float = 0.0, depth: int = 1) -> tuple:
    out: List = []
    for _ in range(rng.randint(0, max_len)):
        if depth > 0 and rng.random() < pack_prob:
            out.append(Pack(random_path(rng, alphabet, max(1, max_len // 2), pack_prob, depth - 1)))
        else:
            out.append(rng.choice(alphabet))
    return tuple(out)


def random_instance(rng: random.Random, schema: Mapping[str, int], alphabet: Sequence[str] = ALPHABET,
                    max_facts: int = 8, max_len: int = 5, pack_prob: float = 0.0) -> Instance:
    """Up to ``max_facts`` facts spread over the relations of ``schema``."""
    facts = []
    names = sorted(schema)
    if names:
        for _ in range(rng.randint(0, max_facts)):
            n = rng.choice(names)
            facts.append((n, tuple(random_path(rng, alphabet, max_len, pack_prob) for _ in range(schema[n]))))
    return Instance.from_facts(facts, dict(schema))


def random_flat_instance(rng: random.Random, schema: Mapping[str, int], **kw) -> Instance:
    kw.pop("pack_prob", None)
    return random_instance(rng, schema, **kw)


def random_expr(rng: random.Random, pvars: Sequence[str], avars: Sequence[str] = (),
                alphabet: Sequence[str] = ("a", "b"), max_len: int = 4, pack_prob: float = 0.0,
                depth: int = 1) -> tuple:
    out: List = []
    for _ in range(rng.randint(0, max_len)):
        x = rng.random()
        if depth > 0 and x < pack_prob:
            out.append(Pack(random_expr(rng, pvars, avars, alphabet, max(1, max_len // 2), 0.0, depth - 1)))
        elif x < 0.55 and pvars:
            out.append(Var(rng.choice(pvars)))
        elif x < 0.7 and avars:
            out.append(Var(rng.choice(avars), True))
        else:
            out.append(rng.choice(alphabet))
    return tuple(out)
