"""Bundled example programs with small instances and expected outputs."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Dict, Optional

from ..core import Instance
from ..program import Program
from ..syntax import parse_instance, parse_program


@dataclass(frozen=True)
class Entry:
    name: str
    output: str
    data: Optional[str] = None
    recursive: bool = False
    terminates: bool = True


ENTRIES: Dict[str, Entry] = {e.name: e for e in [
    Entry("nfa", "A", "nfa", recursive=True),
    Entry("cool", "A", "cool"),
    Entry("onlyas_e", "S", "onlyas"),
    Entry("onlyas_air", "S", "onlyas", recursive=True),
    Entry("onlyas_i", "S", "onlyas"),
    Entry("reversal", "S", "reversal", recursive=True),
    Entry("reversal_unary", "S", "reversal", recursive=True),
    Entry("aibi", "S", "aibi", recursive=True),
    Entry("aibi_rewritten", "S", "aibi", recursive=True),
    Entry("squaring", "S", "squaring", recursive=True),
    Entry("reachability", "S", "reachability", recursive=True),
    Entry("white_black", "S", "white_black"),
    Entry("nonterminating", "T", "nonterminating", recursive=True, terminates=False),
    Entry("lemma10_example", "T", "lemma10"),
    Entry("lemma10_normalized", "T", "lemma10"),
    Entry("doubling", "R'", "doubling", recursive=True),
    Entry("undoubling", "S", "undoubling", recursive=True),
]}


def _text(filename: str) -> str:
    return resources.files(__name__).joinpath(filename).read_text(encoding="utf-8")


def names():
    return sorted(ENTRIES)


def path(filename: str) -> str:
    return str(resources.files(__name__).joinpath(filename))


def load_program(name: str) -> Program:
    return parse_program(_text(f"{name}.sdl"))


def load_instance(name: str) -> Instance:
    return parse_instance(_text(f"{ENTRIES[name].data}.sdb"))


def load_expected(name: str) -> Optional[Instance]:
    e = ENTRIES[name]
    if not e.terminates:
        return None
    return parse_instance(_text(f"{e.data}.expected"))
