"""Clemens complexes of a strict normal crossings boundary and their fixed,
analytic and restricted subcomplexes.

A face is a pair (A, Z): a set A of boundary components and an irreducible
component Z of their intersection. Faces are ordered by (A', Z') < (A, Z) when
A' is a proper subset of A and Z is contained in Z'. Dimensions are poset
dimensions: the length of the longest chain ending at a face.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


class ClemensError(ValueError):
    """Base class for validation errors in this module."""


class InconsistentIncidence(ClemensError):
    """Faces or group data do not describe a consistent incidence structure."""


class NotAPoset(ClemensError):
    """The declared faces do not form a partially ordered set."""


class PointFlagInconsistency(ClemensError):
    """A face has rational points while a face below it has none."""


class FaceNotInvariant(ClemensError):
    """The face is not fixed by the group action."""


class ActionTooLarge(RuntimeError):
    """Group closure exceeded the element budget."""


GROUP_BUDGET = 10**6


@dataclass(frozen=True, slots=True, order=True)
class Face:
    components: frozenset[str]
    stratum: str
    has_point: bool = field(default=True, compare=False)

    @property
    def key(self) -> tuple[frozenset[str], str]:
        return self.components, self.stratum

    def label(self) -> str:
        return "{" + ",".join(sorted(self.components)) + "}:" + self.stratum


Permutation = Mapping[str, str]


@dataclass(frozen=True, slots=True)
class GroupAction:
    """A finite group given by generators permuting components and strata.

    ``stratum_maps[i]`` optionally sends stratum names to stratum names for
    generator i; when absent, a face (A, Z) goes to (gA, Z) if that face exists,
    otherwise to the unique face over gA.
    """

    generators: tuple[Permutation, ...] = ()
    stratum_maps: tuple[Mapping[str, str], ...] = ()

    def elements(self, budget: int = GROUP_BUDGET) -> list[dict[str, str]]:
        """Closure of the generators as explicit permutations of the components."""
        if not self.generators:
            return [{}]
        support = sorted(set().union(*(g.keys() for g in self.generators)))
        ident = tuple(support)
        gens = [tuple(g.get(x, x) for x in support) for g in self.generators]
        index = {x: i for i, x in enumerate(support)}
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for elem in frontier:
                for g in gens:
                    prod = tuple(g[index[x]] for x in elem)
                    if prod not in seen:
                        seen.add(prod)
                        if len(seen) > budget:
                            raise ActionTooLarge(f"group has more than {budget} elements")
                        nxt.append(prod)
            frontier = nxt
        return [dict(zip(support, e)) for e in sorted(seen)]

    def orbits(self, items: Iterable[str]) -> list[frozenset[str]]:
        """Orbits of the generated group on a set of components closed under it."""
        items = set(items)
        parent = {x: x for x in items}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            for x in items:
                y = g.get(x, x)
                if y not in parent:
                    raise FaceNotInvariant(f"{x} is moved outside the set")
                parent[find(x)] = find(y)
        groups: dict[str, set[str]] = {}
        for x in items:
            groups.setdefault(find(x), set()).add(x)
        return sorted((frozenset(g) for g in groups.values()), key=sorted)


@dataclass(frozen=True, slots=True)
class DivisorIncidence:
    components: Mapping[str, int]  # id -> residue degree f_alpha
    faces: tuple[Face, ...]
    action: GroupAction = GroupAction()
    parents: Mapping[tuple[frozenset[str], str], tuple[str, ...]] = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj: Mapping) -> DivisorIncidence:
        comps = {str(c["id"]): int(c.get("f", 1)) for c in obj["components"]}
        order = [str(c["id"]) for c in obj["components"]]
        gens = []
        for g in obj.get("generators", []):
            if isinstance(g, Mapping):
                gens.append({str(k): str(v) for k, v in g.items()})
            else:
                if sorted(int(i) for i in g) != list(range(len(order))):
                    raise InconsistentIncidence(f"generator {g!r} is not a permutation of the components")
                gens.append({order[i]: order[int(j)] for i, j in enumerate(g)})
        smaps = tuple({str(k): str(v) for k, v in m.items()} for m in obj.get("stratum_maps", []))
        faces, parents = [], {}
        for f in obj["faces"]:
            face = Face(frozenset(str(a) for a in f["A"]), str(f["Z"]), bool(f.get("has_point", True)))
            faces.append(face)
            if "contained_in" in f:
                parents[face.key] = tuple(str(z) for z in f["contained_in"])
        return cls(comps, tuple(faces), GroupAction(tuple(gens), smaps), parents)


@dataclass(frozen=True, slots=True)
class ClemensComplex:
    """A finite poset of faces with its strict order relation."""

    faces: tuple[Face, ...]
    below: Mapping[tuple, frozenset[tuple]]  # face key -> keys strictly below
    components: Mapping[str, int] = field(default_factory=dict)

    def face(self, key) -> Face:
        return next(f for f in self.faces if f.key == key)

    def keys(self) -> list[tuple]:
        return [f.key for f in self.faces]

    def face_dimension(self, face: Face | tuple) -> int:
        key = face.key if isinstance(face, Face) else face
        return _chain_lengths(self)[key]

    @property
    def dimension(self) -> int:
        """Poset dimension; -1 for the empty complex."""
        lengths = _chain_lengths(self)
        return max(lengths.values(), default=-1)

    def vertices(self) -> list[Face]:
        return [f for f in self.faces if not self.below[f.key]]

    def maximal_faces(self) -> list[Face]:
        return [f for f in self.faces if self.face_dimension(f) == self.dimension]

    def subcomplex(self, keep: Iterable[tuple]) -> ClemensComplex:
        keep = set(keep)
        faces = tuple(f for f in self.faces if f.key in keep)
        below = {f.key: frozenset(self.below[f.key] & keep) for f in faces}
        return ClemensComplex(faces, below, self.components)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "faces": [
                {"A": sorted(f.components), "Z": f.stratum, "has_point": f.has_point, "dim": self.face_dimension(f)}
                for f in sorted(self.faces, key=lambda f: (len(f.components), sorted(f.components), f.stratum))
            ],
        }


def _chain_lengths(cc: ClemensComplex) -> dict[tuple, int]:
    memo: dict[tuple, int] = {}
    for key in sorted(cc.below, key=lambda k: len(k[0])):
        memo[key] = max((memo[b] + 1 for b in cc.below[key]), default=0)
    return memo


def build_clemens(incidence: DivisorIncidence) -> ClemensComplex:
    """Validate the incidence data and return the Clemens complex C_{F}(D)."""
    keys: dict[tuple, Face] = {}
    by_set: dict[frozenset[str], list[Face]] = {}
    for face in incidence.faces:
        if not face.components:
            raise NotAPoset("faces need a non-empty set of components")
        unknown = face.components - set(incidence.components)
        if unknown:
            raise InconsistentIncidence(f"face {face.label()} uses unknown components {sorted(unknown)}")
        if face.key in keys:
            raise NotAPoset(f"face {face.label()} is declared twice")
        keys[face.key] = face
        by_set.setdefault(face.components, []).append(face)

    # immediate relations: for each alpha in A, the face over A - {alpha} containing Z
    immediate: dict[tuple, set[tuple]] = {k: set() for k in keys}
    for face in incidence.faces:
        if len(face.components) == 1:
            continue
        declared = incidence.parents.get(face.key)
        for alpha in sorted(face.components):
            sub = face.components - {alpha}
            candidates = by_set.get(sub, [])
            if declared is not None:
                candidates = [c for c in candidates if c.stratum in declared]
            if len(candidates) != 1:
                what = "no" if not candidates else "several"
                raise InconsistentIncidence(f"{what} face over {sorted(sub)} contains {face.label()}")
            immediate[face.key].add(candidates[0].key)

    below: dict[tuple, frozenset[tuple]] = {}
    for key in sorted(keys, key=lambda k: len(k[0])):
        acc: set[tuple] = set()
        for parent in immediate[key]:
            acc.add(parent)
            acc |= below[parent]
        if key in acc:
            raise NotAPoset(f"cycle through {keys[key].label()}")
        below[key] = frozenset(acc)
        per_set: dict[frozenset[str], int] = {}
        for b in acc:
            per_set[b[0]] = per_set.get(b[0], 0) + 1
        for r in range(1, len(key[0])):
            for sub in itertools.combinations(sorted(key[0]), r):
                if per_set.get(frozenset(sub), 0) != 1:
                    raise InconsistentIncidence(
                        f"{keys[key].label()} must lie in exactly one face over {list(sub)}"
                    )
    cc = ClemensComplex(tuple(incidence.faces), below, dict(incidence.components))
    for i, _ in enumerate(incidence.action.generators):
        images = {k: _image(cc, incidence.action, i, k) for k in keys}
        if len(set(images.values())) != len(images):
            raise InconsistentIncidence(f"generator {i} does not act bijectively on faces")
        for k in keys:
            if {images[b] for b in below[k]} != set(below[images[k]]):
                raise InconsistentIncidence(f"generator {i} does not preserve the order at {keys[k].label()}")
    return cc


def _image(cc: ClemensComplex, action: GroupAction, gen: int, key: tuple) -> tuple:
    g = action.generators[gen]
    comps, stratum = key
    target = frozenset(g.get(a, a) for a in comps)
    if gen < len(action.stratum_maps) and stratum in action.stratum_maps[gen]:
        image = (target, action.stratum_maps[gen][stratum])
        if image not in cc.below:
            raise InconsistentIncidence(f"stratum map sends {stratum} to an undeclared face")
        return image
    if (target, stratum) in cc.below:
        return (target, stratum)
    over = [k for k in cc.below if k[0] == target]
    if len(over) != 1:
        raise InconsistentIncidence(f"cannot determine the image of face {sorted(comps)}:{stratum}")
    return over[0]


def is_fixed(cc: ClemensComplex, action: GroupAction, face: Face | tuple) -> bool:
    key = face.key if isinstance(face, Face) else face
    return all(_image(cc, action, i, key) == key for i in range(len(action.generators)))


def fixed_subcomplex(cc: ClemensComplex, action: GroupAction) -> ClemensComplex:
    """Faces fixed by the group (fixed by every generator)."""
    return cc.subcomplex(k for k in cc.keys() if is_fixed(cc, action, k))


def analytic_subcomplex(cc_fixed: ClemensComplex) -> ClemensComplex:
    """Faces whose stratum has a rational point; must be closed downwards."""
    keep = []
    for face in cc_fixed.faces:
        if not face.has_point:
            continue
        for b in cc_fixed.below[face.key]:
            if not cc_fixed.face(b).has_point:
                raise PointFlagInconsistency(
                    f"{face.label()} has points but the larger stratum {cc_fixed.face(b).label()} has none"
                )
        keep.append(face.key)
    return cc_fixed.subcomplex(keep)


def face_dimension_an(face: Face, cc: ClemensComplex, action: GroupAction) -> int:
    """#(A / Gamma) - 1 for a Gamma-invariant face."""
    if not is_fixed(cc, action, face):
        raise FaceNotInvariant(f"{face.label()} is not invariant")
    return len(action.orbits(face.components)) - 1


@dataclass(frozen=True, slots=True)
class RestrictedComplex:
    a: Fraction | float
    b: int
    complex: ClemensComplex
    critical_components: frozenset[str]

    @property
    def maximal_faces(self) -> list[Face]:
        return self.complex.maximal_faces() if self.complex.faces else []


def restricted_complex(
    cc: ClemensComplex, lam: Mapping[str, Fraction], rho: Mapping[str, Fraction]
) -> RestrictedComplex:
    """Faces all of whose components maximise rho/lambda; b = 1 + dimension."""
    comps = sorted(set().union(*(f.components for f in cc.faces))) if cc.faces else []
    if not comps:
        return RestrictedComplex(float("-inf"), 0, cc.subcomplex(()), frozenset())
    for alpha in comps:
        if Fraction(lam[alpha]) <= 0:
            raise ClemensError(f"lambda_{alpha} must be positive")
    ratios = {alpha: Fraction(rho[alpha]) / Fraction(lam[alpha]) for alpha in comps}
    a = max(ratios.values())
    critical = frozenset(alpha for alpha, r in ratios.items() if r == a)
    sub = cc.subcomplex(f.key for f in cc.faces if f.components <= critical)
    return RestrictedComplex(a, sub.dimension + 1, sub, critical)


def poset_isomorphic(first: ClemensComplex, second: ClemensComplex) -> bool:
    """Brute-force poset isomorphism test for small complexes (by dimension layers)."""
    if len(first.faces) != len(second.faces):
        return False
    fa = {k: first.face_dimension(k) for k in first.keys()}
    fb = {k: second.face_dimension(k) for k in second.keys()}
    if sorted(fa.values()) != sorted(fb.values()):
        return False
    keys_a = sorted(fa, key=lambda k: (fa[k], sorted(k[0]), k[1]))

    def extend(mapping: dict, used: set) -> bool:
        if len(mapping) == len(keys_a):
            return True
        k = keys_a[len(mapping)]
        for cand in second.keys():
            if cand in used or fb[cand] != fa[k]:
                continue
            ok = all((m in first.below[k]) == (mapping[m] in second.below[cand]) for m in mapping)
            ok = ok and all((k in first.below[m]) == (cand in second.below[mapping[m]]) for m in mapping)
            if ok:
                mapping[k] = cand
                used.add(cand)
                if extend(mapping, used):
                    return True
                del mapping[k]
                used.discard(cand)
        return False

    return extend({}, set())
