"""Normalized Alexander-polynomial families and L-space necessary conditions.

A LinkProfile packages the symmetric Alexander polynomial of every nonempty
sublink (each defined up to a global sign, tracked by a flag) together with
the pairwise linking numbers.  From it the normalized family is built: one
polynomial per proper sublink-complement, monomially shifted by half linking
numbers, with a geometric-series tail factor when a single component
remains.

The checkers evaluate, at every lattice point of a finite box, the signed
sums of coefficients that must land in {0, 1} for an L-space link, plus the
sharper alternating-sign conditions available for two components.
"""

from __future__ import annotations

import itertools
import json
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property

from .bridge import (TwoBridge, alexander, even_expansion, linking_number)
from .errors import CosetViolation, RegionUnstable
from .laurent import MultiLaurent, TailPoly, restrict

Subset = frozenset


def subsets_of(l: int, *, proper=False, nonempty=False):
    out = []
    for r in range(0 if not nonempty else 1, l + 1 if not proper else l):
        out.extend(frozenset(c) for c in itertools.combinations(range(1, l + 1), r))
    return out


def subset_key(s) -> str:
    return "".join(str(i) for i in sorted(s))


@dataclass(frozen=True)
class LinkProfile:
    """Alexander polynomials of all sublinks plus pairwise linking numbers.

    delta maps each nonempty subset of {1..l} to the Alexander polynomial of
    that sublink, in the subset's own variables (ordered by component index).
    signs carries "+", "-" or "auto" per subset; the polynomials stored in
    delta are the ones used by every computation, and flipping a sign means
    replacing the stored polynomial by its negative.
    """

    l: int
    lk: tuple[tuple[int, ...], ...]
    delta: dict
    signs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.l <= 3:
            raise ValueError("component count must be 1..3")
        lk = tuple(tuple(int(x) for x in row) for row in self.lk)
        if len(lk) != self.l or any(len(r) != self.l for r in lk):
            raise ValueError("lk must be an l-by-l matrix")
        if any(lk[i][j] != lk[j][i] for i in range(self.l) for j in range(self.l)):
            raise ValueError("lk must be symmetric")
        if any(lk[i][i] != 0 for i in range(self.l)):
            raise ValueError("lk must have zero diagonal")
        object.__setattr__(self, "lk", lk)
        delta = {frozenset(k): v for k, v in self.delta.items()}
        want = set(subsets_of(self.l, nonempty=True))
        if set(delta) != want:
            raise ValueError("delta must cover every nonempty sublink")
        for m, poly in delta.items():
            if poly.nvars != len(m):
                raise ValueError(f"delta[{subset_key(m)}] has wrong variable count")
        object.__setattr__(self, "delta", delta)
        signs = {frozenset(k): v for k, v in self.signs.items()}
        for m in want:
            signs.setdefault(m, "auto")
        if any(v not in ("+", "-", "auto") for v in signs.values()):
            raise ValueError("sign flags must be '+', '-' or 'auto'")
        object.__setattr__(self, "signs", signs)
        self._check_cosets()

    def _check_cosets(self):
        for m, poly in self.delta.items():
            comps = sorted(m)
            for pos, i in enumerate(comps, start=1):
                par = poly.parity(pos)
                if par is None:
                    continue
                lk_inside = sum(self.lkval(i, j) for j in comps if j != i)
                want = (lk_inside + (1 if len(m) > 1 else 0)) & 1
                if par != want:
                    raise CosetViolation(
                        f"delta[{subset_key(m)}] variable u{pos} exponents lie "
                        f"off the lattice forced by the linking numbers")

    def lkval(self, i: int, j: int) -> int:
        return self.lk[i - 1][j - 1]

    def lk_with(self, i: int, s) -> int:
        """Total linking number of component i with the sublink s."""
        return sum(self.lkval(i, j) for j in s if j != i)

    def lk_total(self, i: int) -> int:
        return self.lk_with(i, range(1, self.l + 1))

    def coset_parity(self, i: int) -> int:
        """Parity of the doubled coordinates of the lattice in direction i."""
        return self.lk_total(i) & 1

    def full(self) -> Subset:
        return frozenset(range(1, self.l + 1))

    def auto_subsets(self) -> list[Subset]:
        return [m for m in sorted(self.signs, key=subset_key)
                if self.signs[m] == "auto"]

    def with_signs(self, resolution: dict) -> LinkProfile:
        """Apply a sign choice (+1/-1 per subset) and pin the flags."""
        delta = dict(self.delta)
        signs = dict(self.signs)
        for m, s in resolution.items():
            m = frozenset(m)
            if s == -1:
                delta[m] = -delta[m]
            signs[m] = "+"
        return LinkProfile(self.l, self.lk, delta, signs)

    def sub_profile(self, m) -> LinkProfile:
        """Profile of the sublink on components m, reindexed to 1..|m|."""
        comps = sorted(m)
        rank = {c: i + 1 for i, c in enumerate(comps)}
        lk = tuple(tuple(self.lkval(a, b) for b in comps) for a in comps)
        delta = {}
        signs = {}
        for sub in subsets_of(len(comps), nonempty=True):
            orig = frozenset(comps[i - 1] for i in sub)
            delta[sub] = self.delta[orig]
            signs[sub] = self.signs[orig]
        del rank
        return LinkProfile(len(comps), lk, delta, signs)

    # -- JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "lk": [list(r) for r in self.lk],
            "delta": {subset_key(m): self.delta[m].to_json()
                      for m in sorted(self.delta, key=subset_key)},
            "signs": {subset_key(m): self.signs[m]
                      for m in sorted(self.signs, key=subset_key)},
        }

    @staticmethod
    def from_json(data) -> LinkProfile:
        if isinstance(data, str):
            data = json.loads(data)
        delta = {frozenset(int(ch) for ch in key): MultiLaurent.from_json(val)
                 for key, val in data["delta"].items()}
        signs = {frozenset(int(ch) for ch in key): val
                 for key, val in data.get("signs", {}).items()}
        return LinkProfile(data["l"], tuple(tuple(r) for r in data["lk"]),
                           delta, signs)


# -- profile constructors -------------------------------------------------------


def unknot_profile() -> LinkProfile:
    return LinkProfile(1, ((0,),), {frozenset({1}): MultiLaurent.const(1, 1)},
                       {frozenset({1}): "+"})


def unlink_profile(l: int = 2) -> LinkProfile:
    """The l-component unlink: unknot components, vanishing higher Delta."""
    lk = tuple(tuple(0 for _ in range(l)) for _ in range(l))
    delta = {}
    signs = {}
    for m in subsets_of(l, nonempty=True):
        if len(m) == 1:
            delta[m] = MultiLaurent.const(1, 1)
        else:
            delta[m] = MultiLaurent.zero(len(m))
        signs[m] = "+"
    return LinkProfile(l, lk, delta, signs)


def two_bridge_profile(link_or_expansion, sign: str = "auto") -> LinkProfile:
    """Profile of a two-bridge link: unknotted components, recursion Delta."""
    if isinstance(link_or_expansion, TwoBridge):
        exp = even_expansion(link_or_expansion)
    else:
        exp = link_or_expansion
    lkn = linking_number(exp)
    one = MultiLaurent.const(1, 1)
    full = frozenset({1, 2})
    return LinkProfile(
        2, ((0, lkn), (lkn, 0)),
        {frozenset({1}): one, frozenset({2}): one, full: alexander(exp)},
        {frozenset({1}): "+", frozenset({2}): "+", full: sign})


# -- normalized family ------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedFamily:
    """Map from each proper subset S to the normalized polynomial of the
    complementary sublink: a MultiLaurent when at least two components
    remain, a TailPoly when exactly one does."""

    l: int
    entries: dict

    def __getitem__(self, s):
        return self.entries[frozenset(s)]

    @property
    def p_empty(self):
        return self.entries[frozenset()]

    @cached_property
    def _column_index(self):
        """Suffix-sum tables for two-variable entries, per direction.

        Maps (S, r) to {e_r: (sorted other exponents, suffix sums)} so that
        dominance sums reduce to one bisect.
        """
        idx = {}
        for s, entry in self.entries.items():
            if isinstance(entry, TailPoly) or entry.nvars != 2:
                continue
            comp = sorted(set(range(1, self.l + 1)) - s)
            for rpos, r in enumerate(comp):
                cols = {}
                for e2, c in entry.terms.items():
                    cols.setdefault(e2[rpos], []).append((e2[1 - rpos], c))
                packed = {}
                for er, pairs in cols.items():
                    pairs.sort()
                    exps = [e for e, _ in pairs]
                    suff = [0] * (len(pairs) + 1)
                    for k in range(len(pairs) - 1, -1, -1):
                        suff[k] = suff[k + 1] + pairs[k][1]
                    packed[er] = (exps, suff)
                idx[(s, r)] = packed
        return idx


def normalized_family(prof: LinkProfile) -> NormalizedFamily:
    """Build every normalized sublink polynomial of the profile.

    The complement of S keeps variables in ascending component order.  For
    two or more remaining components the stored Alexander polynomial is
    shifted by u_j^(1/2 + lk(L_j, S)/2) in every remaining variable; for one
    remaining component the same linking shift is folded into a geometric
    tail.  For a knot (l = 1) the empty-S entry is the tail of Delta itself.
    """
    entries = {}
    for s in subsets_of(prof.l, proper=True):
        comp = sorted(set(range(1, prof.l + 1)) - s)
        poly = prof.delta[frozenset(comp)]
        if len(comp) >= 2:
            shift = tuple(1 + prof.lk_with(j, s) for j in comp)
            entries[s] = poly.shifted(shift)
        else:
            j = comp[0]
            numer = poly.shifted((prof.lk_with(j, s),))
            entries[s] = TailPoly(j, numer)
    fam = NormalizedFamily(prof.l, entries)
    _check_family_cosets(prof, fam)
    return fam


def _check_family_cosets(prof: LinkProfile, fam: NormalizedFamily):
    for s, entry in fam.entries.items():
        comp = sorted(set(range(1, prof.l + 1)) - s)
        if isinstance(entry, TailPoly):
            par = entry.numer.parity(1)
            if par is not None and par != prof.coset_parity(comp[0]):
                raise CosetViolation(
                    f"tail for S={subset_key(s) or 'empty'} misses the lattice")
        else:
            for pos, j in enumerate(comp, start=1):
                par = entry.parity(pos)
                if par is not None and par != prof.coset_parity(j):
                    raise CosetViolation(
                        f"P for S={subset_key(s) or 'empty'} misses the lattice "
                        f"in variable u{j}")


def r_sum(fam: NormalizedFamily, s_set, point2, r: int) -> int:
    """Signed-region coefficient sum of one normalized polynomial.

    Sums the coefficients of the entry at S over the exponents that agree
    with the point in direction r and dominate it in every other remaining
    direction.  point2 is a full-length doubled lattice point; only its
    coordinates outside S matter.
    """
    s_set = frozenset(s_set)
    if r in s_set:
        raise ValueError("direction r must lie outside S")
    entry = fam.entries[s_set]
    comp = sorted(set(range(1, fam.l + 1)) - s_set)
    if isinstance(entry, TailPoly):
        return entry.coeff(point2[r - 1])
    if entry.nvars == 2:
        packed = fam._column_index[(s_set, r)].get(point2[r - 1])
        if packed is None:
            return 0
        other = next(j for j in comp if j != r)
        exps, suff = packed
        return suff[bisect_left(exps, point2[other - 1])]
    rpos = comp.index(r)
    total = 0
    for e2, c in entry.terms.items():
        if e2[rpos] != point2[r - 1]:
            continue
        if all(e2[pos] >= point2[j - 1]
               for pos, j in enumerate(comp) if j != r):
            total += c
    return total


def theorem_sum(fam: NormalizedFamily, point2, r: int) -> int:
    """The alternating sum over admissible S of the signed region sums."""
    l = fam.l
    total = 0
    for s in subsets_of(l, proper=True):
        if r in s:
            continue
        total += (-1) ** (l - 1 - len(s)) * r_sum(fam, s, point2, r)
    return total


# -- boxes ----------------------------------------------------------------------


def m_vector(prof: LinkProfile) -> tuple[int, ...]:
    """The recursive stabilization corner of the lattice (doubled coords).

    For a knot this is the top degree of Delta; in general each coordinate
    is the maximum of the top degree of the normalized full polynomial and
    of the sublink values shifted by half linking numbers.
    """
    if prof.l == 1:
        d = prof.delta[frozenset({1})]
        if d.is_zero():
            raise ValueError("a knot profile needs a nonzero Alexander polynomial")
        return (d.max_exp2(1),)
    fam = normalized_family(prof)
    p0 = fam.p_empty
    out = []
    for i in range(1, prof.l + 1):
        cands = []
        if not p0.is_zero():
            cands.append(p0.max_exp2(i))
        for j in range(1, prof.l + 1):
            if j == i:
                continue
            sub = prof.sub_profile(frozenset(range(1, prof.l + 1)) - {j})
            idx = i if j > i else i - 1
            cands.append(m_vector(sub)[idx - 1] + prof.lkval(i, j))
        out.append(max(cands))
    return tuple(out)


def default_box(prof: LinkProfile, margin: int = 2):
    """Per-coordinate doubled ranges [lo2, hi2] on the lattice cosets."""
    if margin < 2:
        raise ValueError("box margin must be at least 2")
    m2 = m_vector(prof)
    fam = normalized_family(prof)
    p0 = fam.p_empty
    los, his = [], []
    for i in range(1, prof.l + 1):
        if isinstance(p0, TailPoly):
            lo = p0.numer.min_exp2(1)
            hi = p0.numer.max_exp2(1)
        else:
            lo = p0.min_exp2(i) if not p0.is_zero() else m2[i - 1]
            hi = p0.max_exp2(i) if not p0.is_zero() else m2[i - 1]
        los.append(lo - 2 * margin)
        his.append(max(m2[i - 1], hi) + 2 * margin)
    return tuple(zip(los, his))


def box_points(box):
    """All doubled lattice points of a box, stepping by 2 per coordinate."""
    ranges = [range(lo, hi + 1, 2) for lo, hi in box]
    return itertools.product(*ranges)


# -- checkers ---------------------------------------------------------------------


@dataclass(frozen=True)
class TheoremReport:
    ok: bool
    violations: tuple
    box: tuple

    def to_json(self):
        return {"ok": self.ok, "box": [list(b) for b in self.box],
                "violations": [{"s2": list(p), "r": r, "value": v}
                               for p, r, v in self.violations]}


def theorem_alex_check(prof: LinkProfile, box=None, margin: int = 2) -> TheoremReport:
    """Evaluate the signed coefficient-sum condition over a box.

    Every lattice point and every direction must give a value of 0 or 1.
    Values on the box boundary are compared with their outward neighbors;
    disagreement raises RegionUnstable since the box then failed to capture
    the stable behavior.
    """
    fam = normalized_family(prof)
    if box is None:
        box = default_box(prof, margin)
    violations = []
    for point in box_points(box):
        for r in range(1, prof.l + 1):
            val = theorem_sum(fam, point, r)
            if val not in (0, 1):
                violations.append((tuple(point), r, val))
    _check_box_stability(fam, box)
    return TheoremReport(not violations, tuple(violations), tuple(box))


def _check_box_stability(fam: NormalizedFamily, box):
    l = fam.l
    for axis in range(l):
        for side, step in ((0, -2), (1, 2)):
            edge = box[axis][side]
            face = tuple((edge, edge) if k == axis else b
                         for k, b in enumerate(box))
            for point in box_points(face):
                outward = tuple(x + step if k == axis else x
                                for k, x in enumerate(point))
                for r in range(1, l + 1):
                    if theorem_sum(fam, point, r) != theorem_sum(fam, outward, r):
                        raise RegionUnstable(
                            f"value changes stepping outward at {point} "
                            f"(direction {r}); enlarge the margin")


@dataclass(frozen=True)
class CorReport:
    ok: bool
    failures: tuple        # (clause, r, s2_of_u_r, detail)
    sign: int | None       # the unique passing global sign of Delta_L, if any

    def first_failure(self):
        return self.failures[0] if self.failures else None

    def to_json(self):
        return {"ok": self.ok, "sign": self.sign,
                "failures": [{"clause": c, "r": r, "e2": e, "detail": d}
                             for c, r, e, d in self.failures]}


def cor_alex2_check(prof: LinkProfile) -> CorReport:
    """Two-component coefficient conditions on the normalized polynomial.

    Checks that (a) all coefficients are -1, 0 or 1; (b) the nonzero
    coefficients along each row and column alternate in sign; (c) the
    highest nonzero coefficient of each restriction matches the tail
    coefficient rule (+1 under a 1, -1 under a 0).  Also reports which
    global sign of the full Alexander polynomial passes, when exactly one
    does.
    """
    if prof.l != 2:
        raise ValueError("this corollary checker needs exactly two components")
    passing = [s for s in (1, -1)
               if not _cor_failures(prof.with_signs({prof.full(): s}))]
    failures = _cor_failures(prof)
    sign = passing[0] if len(passing) == 1 else None
    return CorReport(not failures, tuple(failures), sign)


def _cor_failures(prof: LinkProfile):
    fam = normalized_family(prof)
    p0 = fam.p_empty
    failures = []
    for e2, c in sorted(p0.terms.items()):
        if abs(c) > 1:
            failures.append(("coefficient", 0, list(e2),
                             f"coefficient {c} at {e2}"))
    for r in (1, 2):
        tail = fam.entries[frozenset({3 - r})]
        if not tail.numer.is_zero():
            for er in range(tail.numer.min_exp2(1) - 2,
                            tail.numer.max_exp2(1) + 3, 2):
                if tail.coeff(er) not in (0, 1):
                    failures.append(("tail", r, er,
                                     f"tail coefficient {tail.coeff(er)}"))
        exps = sorted({e2[r - 1] for e2 in p0.terms})
        for er in exps:
            col = restrict(p0, r, er)
            if col.is_zero():
                continue
            ordered = [c for (_,), c in sorted(col.terms.items())]
            nz = [c for c in ordered if c]
            for a, b in zip(nz, nz[1:]):
                if a * b > 0:
                    failures.append(("alternation", r, er,
                                     "equal consecutive signs"))
                    break
            t = tail.coeff(er)
            if t not in (0, 1):
                continue  # reported by the tail-range scan above
            want = 1 if t == 1 else -1
            if nz and nz[-1] != want:
                failures.append(("leading", r, er,
                                 f"top coefficient {nz[-1]}, expected {want}"))
        # tail exponents where the restriction is zero: nothing to check;
        # the theorem-level sums cover those points.
    return failures
