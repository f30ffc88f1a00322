"""
Free-group words and Serre presentations of graphs of cyclic groups.

For each oriented edge e the presentation carries
    t_e a_{∂e}^{k_e} t_e^-1 = a_{∂ē}^{k_ē},
with t_ē eliminated as t_e^-1 and tree letters set to 1.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from ..errors import SchemaError
from ..logs import get_logger
from .graph_of_groups import GraphOfGroupsSpec

log = get_logger("groups.presentation")


@dataclass(frozen=True)
class Word:
    """Freely reduced word as (generator, power) syllables."""
    syllables: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        out: List[Tuple[str, int]] = []
        for gen, power in self.syllables:
            if out and out[-1][0] == gen:
                out[-1] = (gen, out[-1][1] + int(power))
            else:
                out.append((gen, int(power)))
            if out and out[-1][1] == 0:
                out.pop()
        object.__setattr__(self, "syllables", tuple(out))

    @classmethod
    def letter(cls, gen: str, power: int = 1) -> "Word":
        return cls(((gen, power),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def __invert__(self) -> "Word":
        return Word(tuple((g, -p) for g, p in reversed(self.syllables)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return (~self) ** -n
        return Word(self.syllables * n)

    def conjugate(self, other: "Word") -> "Word":
        return other * self * ~other

    @property
    def generators(self) -> Tuple[str, ...]:
        return tuple(sorted({g for g, _ in self.syllables}))

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return " ".join(g if p == 1 else f"{g}^{p}" for g, p in self.syllables)

    @classmethod
    def parse(cls, s: str, gens: Sequence[str]) -> "Word":
        """Inverse of str(): space-separated syllables 'g' or 'g^n'; '1' is the empty word."""
        s = s.strip()
        if s in ("", "1"):
            return cls()
        out = []
        for tok in s.split():
            gen, _, power = tok.partition("^")
            if gen not in gens:
                raise SchemaError(f"unknown generator {gen!r} in {s!r}")
            try:
                out.append((gen, int(power) if power else 1))
            except ValueError as e:
                raise SchemaError(f"invalid power in {tok!r}") from e
        return cls(tuple(out))


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relations: Tuple[Tuple[Word, Word], ...]          # lhs = rhs
    eliminated: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        known = set(self.generators)
        for lhs, rhs in self.relations:
            stray = set(lhs.generators + rhs.generators) - known
            if stray:
                raise SchemaError(f"relation uses undeclared generators {sorted(stray)}")

    @property
    def relators(self) -> Tuple[Word, ...]:
        return tuple(lhs * ~rhs for lhs, rhs in self.relations)

    def to_text(self) -> str:
        rels = ", ".join(f"{lhs} = {rhs}" for lhs, rhs in self.relations)
        return f"⟨{', '.join(self.generators)} | {rels}⟩"

    def to_json(self) -> Dict[str, Any]:
        return {
            "generators": list(self.generators),
            "relations": [{"lhs": str(l), "rhs": str(r), "relator": str(l * ~r)} for l, r in self.relations],
            "text": self.to_text(),
            "eliminated": list(self.eliminated),
        }


def serre_presentation(spec: GraphOfGroupsSpec) -> Presentation:
    gens = [spec.generator(v) for v in spec.vertices]
    steps: List[str] = []
    relations = []
    for e in spec.orientation:
        edge = spec.edge(e)
        bar = spec.edge(edge.bar)
        a_in = Word.letter(spec.generator(edge.origin), edge.k)
        a_out = Word.letter(spec.generator(bar.origin), bar.k)
        if spec.in_tree(e):
            steps += [f"t_{e} -> 1", f"t_{bar.id} -> 1"]
            relations.append((a_in, a_out))
        else:
            t = spec.stable_letter(e)
            gens.append(t)
            steps.append(f"t_{bar.id} -> {t}^-1")
            relations.append((a_in.conjugate(Word.letter(t)), a_out))
    if len(set(gens)) != len(gens):
        raise SchemaError(f"generator names collide: {gens}")
    pres = Presentation(tuple(gens), tuple(relations), tuple(steps))
    log.debug("presentation %s", pres.to_text())
    return pres
