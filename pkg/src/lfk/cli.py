"""Command-line surface and the two-bridge classification sweep.

Exit status: 0 for a completed computation, 1 for a usage error, 2 for a
mathematical rejection (an obstruction fired); rejections print a
machine-readable JSON reason on standard output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

from .bridge import TwoBridge, even_expansion, signature
from .cubes import CubeLabeling, corner_homology, oracle_corner_homology
from .errors import LfkError, NotLSpaceLink, UnsupportedForm
from .floer import alternating_cross_check, build_tgraph, hfl_hat, hfl_minus
from .lspace import (LinkProfile, cor_alex2_check, normalized_family,
                     theorem_alex_check, two_bridge_profile)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REJECTED = 2


def _env_margin() -> int:
    m = int(os.environ.get("LFK_MARGIN", "2"))
    if m < 2:
        raise ValueError("LFK_MARGIN must be an integer >= 2")
    return m


# -- classification sweep ------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    """Verdicts for one equivalence-class representative b(alpha, beta)."""

    alpha: int
    beta: int
    p: tuple[int, ...]
    q: tuple[int, ...]
    cor_alex2: str     # "pass" or "fail:<reason>"
    tgraph: str        # "ok", "NotLSpaceLink" or "skipped"
    sigma_cross: str   # "pass", "fail:<reason>" or "skipped"
    family_member: bool
    class_id: str

    @property
    def survivor(self) -> bool:
        return (self.cor_alex2 == "pass" and self.tgraph == "ok"
                and self.sigma_cross == "pass")

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta,
                "p": list(self.p), "q": list(self.q),
                "cor_alex2": self.cor_alex2, "tgraph": self.tgraph,
                "sigma_cross": self.sigma_cross,
                "family": self.family_member, "class_id": self.class_id}

    @staticmethod
    def from_json(d) -> SweepRecord:
        return SweepRecord(d["alpha"], d["beta"], tuple(d["p"]), tuple(d["q"]),
                           d["cor_alex2"], d["tgraph"], d["sigma_cross"],
                           d["family"], d["class_id"])

    def to_csv_row(self) -> list[str]:
        return [str(self.alpha), str(self.beta),
                ",".join(map(str, self.p)), ",".join(map(str, self.q)),
                self.cor_alex2, self.tgraph, self.sigma_cross,
                str(self.family_member).lower(), self.class_id]

    @staticmethod
    def from_csv_row(row) -> SweepRecord:
        alpha, beta, p, q, cor, tg, sc, fam, cid = row
        return SweepRecord(
            int(alpha), int(beta),
            tuple(int(x) for x in p.split(",") if x),
            tuple(int(x) for x in q.split(",") if x),
            cor, tg, sc, fam == "true", cid)


CSV_COLUMNS = ["alpha", "beta", "p", "q", "cor_alex2", "tgraph",
               "sigma_cross", "family", "class_id"]


def equivalence_orbit(alpha: int, beta: int) -> frozenset[int]:
    """Orbit of beta mod 2*alpha under inversion and the alpha shift."""
    m = 2 * alpha
    seen = {beta % m}
    frontier = list(seen)
    while frontier:
        b = frontier.pop()
        for nxt in (pow(b, -1, m), (b + alpha) % m,
                    (pow(b, -1, m) + alpha) % m):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def _beta_from_residue(alpha: int, r: int) -> int:
    return r if r < alpha else r - 2 * alpha


def class_representative(alpha: int, beta: int) -> TwoBridge:
    """Smallest residue in the reversal-inclusive equivalence class."""
    r = min(equivalence_orbit(alpha, beta))
    return TwoBridge(alpha, _beta_from_residue(alpha, r))


def class_id_of(alpha: int, beta: int) -> str:
    return f"{alpha}:{min(equivalence_orbit(alpha, beta))}"


def all_candidates(max_alpha: int):
    for alpha in range(2, max_alpha + 1, 2):
        for beta in range(-alpha + 1, alpha, 2):
            if beta != 0 and math.gcd(alpha, beta) == 1:
                yield TwoBridge(alpha, beta)


def family_links(max_alpha: int) -> list[TwoBridge]:
    """The known L-space family b(qk-1, -k), q and k odd positive."""
    out = []
    for k in range(1, max_alpha + 2, 2):
        for q in range(1, max_alpha + 2, 2):
            alpha = q * k - 1
            if alpha < 2 or alpha > max_alpha or k >= alpha:
                continue
            out.append(TwoBridge(alpha, -k))
    return out


def _pipeline(rep: TwoBridge, margin: int) -> SweepRecord:
    exp = even_expansion(rep)
    cid = class_id_of(rep.alpha, rep.beta)
    fam = any(equivalent_to_family(rep, member)
              for member in family_links(rep.alpha))
    prof = two_bridge_profile(exp)
    cor = cor_alex2_check(prof)
    if cor.sign is None:
        corv = "fail:" + (cor.failures[0][3] if cor.failures else "no sign")
        return SweepRecord(rep.alpha, rep.beta, exp.p, exp.q, corv,
                           "skipped", "skipped", fam, cid)
    prof = prof.with_signs({prof.full(): cor.sign})
    try:
        tg = build_tgraph(prof, margin=margin)
    except NotLSpaceLink:
        return SweepRecord(rep.alpha, rep.beta, exp.p, exp.q, "pass",
                           "NotLSpaceLink", "skipped", fam, cid)
    table = hfl_minus(prof, tg)
    try:
        sigma = signature(rep)
    except UnsupportedForm:
        return SweepRecord(rep.alpha, rep.beta, exp.p, exp.q, "pass", "ok",
                           "fail:no supported signature family", fam, cid)
    cross = alternating_cross_check(prof, sigma, table)
    scv = "pass" if cross.ok else "fail:" + cross.mismatches[0][1]
    return SweepRecord(rep.alpha, rep.beta, exp.p, exp.q, "pass", "ok",
                       scv, fam, cid)


def equivalent_to_family(link: TwoBridge, member: TwoBridge) -> bool:
    from .bridge import equivalent
    return equivalent(link, member, allow_orientation_reversal=True)


def classify(max_alpha: int, margin: int | None = None) -> list[SweepRecord]:
    """Run the full pipeline on one representative per equivalence class."""
    if max_alpha < 2:
        raise ValueError("max_alpha must be at least 2")
    margin = margin if margin is not None else _env_margin()
    reps = {}
    for cand in all_candidates(max_alpha):
        cid = class_id_of(cand.alpha, cand.beta)
        if cid not in reps:
            reps[cid] = class_representative(cand.alpha, cand.beta)
    records = []
    for cid, rep in sorted(reps.items(), key=lambda kv: (kv[1].alpha,
                                                         kv[1].beta)):
        try:
            records.append(_pipeline(rep, margin))
        except LfkError as err:
            # a broken record must not abort the sweep
            exp = even_expansion(rep)
            records.append(SweepRecord(
                rep.alpha, rep.beta, exp.p, exp.q,
                f"fail:{type(err).__name__}", "skipped", "skipped",
                any(equivalent_to_family(rep, m)
                    for m in family_links(rep.alpha)), cid))
    return records


def classification_summary(records) -> dict:
    max_alpha = max((r.alpha for r in records), default=0)
    survivor_ids = {r.class_id for r in records if r.survivor}
    family_ids = {class_id_of(m.alpha, m.beta)
                  for m in family_links(max_alpha)}
    return {
        "classes": len(records),
        "survivors": sorted(survivor_ids),
        "family": sorted(family_ids),
        "match": survivor_ids == family_ids,
    }


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.to_csv_row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[SweepRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_COLUMNS:
        raise ValueError("unexpected CSV header")
    return [SweepRecord.from_csv_row(row) for row in rows[1:]]


# -- argument handling -----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _profile_from_args(args) -> LinkProfile:
    if getattr(args, "profile", None):
        with open(args.profile) as fh:
            return LinkProfile.from_json(json.load(fh))
    if args.ab is None:
        raise SystemExit(EXIT_USAGE)
    alpha, beta = args.ab
    return two_bridge_profile(TwoBridge(alpha, beta))


def _resolve_two_bridge_sign(prof: LinkProfile) -> tuple[LinkProfile, str | None]:
    rep = cor_alex2_check(prof)
    if rep.sign is None:
        return prof, None
    return prof.with_signs({prof.full(): rep.sign}), "+" if rep.sign == 1 else "-"


def _add_link_args(sub, profile_ok=True):
    sub.add_argument("--ab", nargs=2, type=int, metavar=("ALPHA", "BETA"),
                     help="two-bridge link b(ALPHA, BETA)")
    sub.add_argument("--exp", type=str, default=None,
                     help="interleaved expansion p1,q1,p2,...,pn")
    if profile_ok:
        sub.add_argument("--profile", type=str, default=None,
                         help="path to a link profile JSON file")


def _expansion_from(args):
    from .bridge import EvenExpansion, fraction_of
    if args.exp:
        entries = [int(x) for x in args.exp.replace("(", "").replace(")", "")
                   .split(",") if x.strip()]
        exp = EvenExpansion(tuple(entries[0::2]), tuple(entries[1::2]))
        alpha, beta = fraction_of(exp)
        return TwoBridge(alpha, beta), exp
    if args.ab:
        link = TwoBridge(args.ab[0], args.ab[1])
        return link, even_expansion(link)
    return None, None


def _reject(reason: str, detail=None) -> int:
    payload = {"reason": reason}
    if detail is not None:
        payload["detail"] = detail
    print(json.dumps(payload))
    return EXIT_REJECTED


# -- subcommands ----------------------------------------------------------------


def _cmd_alex(args) -> int:
    link, exp = _expansion_from(args)
    if exp is None:
        print("error: need --ab or --exp", file=sys.stderr)
        return EXIT_USAGE
    prof = two_bridge_profile(exp)
    prof, sign = _resolve_two_bridge_sign(prof)
    fam = normalized_family(prof)
    out = {
        "alpha": link.alpha, "beta": link.beta,
        "expansion": {"p": list(exp.p), "q": list(exp.q)},
        "linking_number": prof.lkval(1, 2),
        "delta": prof.delta[prof.full()].to_json(),
        "p_empty": fam.p_empty.to_json(),
        "sign": sign,
    }
    print(json.dumps(out))
    return EXIT_OK


def _cmd_check(args) -> int:
    prof = _profile_from_args(args)
    margin = args.margin if args.margin else _env_margin()
    if prof.l == 2:
        prof, _ = _resolve_two_bridge_sign(prof)
        cor = cor_alex2_check(prof)
        if not cor.ok:
            f = cor.first_failure()
            return _reject(f"cor_alex2: {f[3]}", cor.to_json())
    thm = theorem_alex_check(prof, margin=margin)
    if not thm.ok:
        p, r, v = thm.violations[0]
        return _reject(f"signed sum {v} at {list(p)} direction {r}",
                       thm.to_json())
    print(json.dumps({"ok": True, "box": [list(b) for b in thm.box]}))
    return EXIT_OK


def _cmd_tgraph(args) -> int:
    prof = _profile_from_args(args)
    if prof.l == 2:
        prof, _ = _resolve_two_bridge_sign(prof)
    try:
        tg = build_tgraph(prof, margin=args.margin or None)
    except NotLSpaceLink as err:
        return _reject(f"NotLSpaceLink: {err}")
    print(json.dumps(tg.to_json()))
    return EXIT_OK


def _cmd_hfl(args) -> int:
    prof = _profile_from_args(args)
    if prof.l == 2:
        prof, _ = _resolve_two_bridge_sign(prof)
    try:
        table = hfl_minus(prof, margin=args.margin or None)
    except NotLSpaceLink as err:
        return _reject(f"NotLSpaceLink: {err}")
    out = table.to_json()
    if args.hat:
        s2 = tuple(int(x) for x in args.hat.split(","))
        from .errors import HypothesisNotMet
        try:
            out["hat"] = {"s2": list(s2), "groups": hfl_hat(table, s2).to_json()}
        except HypothesisNotMet as err:
            return _reject(f"hat hypothesis fails at offset {list(err.offset)}")
    print(json.dumps(out))
    return EXIT_OK


def _parse_cube_labels(n: int, text: str) -> CubeLabeling:
    if text == "all0":
        return CubeLabeling.all_zero(n)
    if text == "all1":
        return CubeLabeling.all_one(n)
    labels = {}
    for part in text.split(","):
        edge, _, val = part.strip().partition(":")
        src, _, dst = edge.partition("->")
        v = tuple(int(ch) for ch in src.strip())
        w = tuple(int(ch) for ch in dst.strip())
        diffs = [k for k in range(n) if v[k] != w[k]]
        if len(v) != n or len(w) != n or len(diffs) != 1 or v[diffs[0]] != 0:
            raise ValueError(f"bad edge {part!r}")
        labels[(v, diffs[0] + 1)] = int(val)
    return CubeLabeling(n, labels)


def _cmd_cube(args) -> int:
    cl = _parse_cube_labels(args.n, args.labels)
    fn = oracle_corner_homology if args.oracle else corner_homology
    try:
        h = fn(cl, args.origin)
    except LfkError as err:
        return _reject(f"{type(err).__name__}: {err}")
    print(json.dumps({"homology": h.to_json()}))
    return EXIT_OK


def _cmd_classify(args) -> int:
    records = classify(args.max_alpha, margin=args.margin or None)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(records_to_csv(records))
    summary = classification_summary(records)
    summary["out"] = args.out
    print(json.dumps(summary))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lfk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alex", help="Alexander data of a two-bridge link")
    _add_link_args(p, profile_ok=False)
    p.set_defaults(fn=_cmd_alex)

    p = sub.add_parser("check", help="run the coefficient obstructions")
    _add_link_args(p)
    p.add_argument("--margin", type=int, default=None)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("tgraph", help="build the labeled lattice graph")
    _add_link_args(p)
    p.add_argument("--margin", type=int, default=None)
    p.set_defaults(fn=_cmd_tgraph)

    p = sub.add_parser("hfl", help="tabulate corner homology over the box")
    _add_link_args(p)
    p.add_argument("--margin", type=int, default=None)
    p.add_argument("--hat", type=str, default=None,
                   help="doubled lattice point for a hat-flavor query")
    p.set_defaults(fn=_cmd_hfl)

    p = sub.add_parser("cube", help="corner homology of one labeled cube")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--labels", type=str, required=True,
                   help='all0, all1, or "00->10:1,00->01:0,..."')
    p.add_argument("--origin", type=int, default=0)
    p.add_argument("--oracle", action="store_true",
                   help="use the truncated free-realization route")
    p.set_defaults(fn=_cmd_cube)

    p = sub.add_parser("classify", help="two-bridge classification sweep")
    p.add_argument("--max-alpha", type=int, required=True)
    p.add_argument("--out", type=str, default=None, help="CSV output path")
    p.add_argument("--margin", type=int, default=None)
    p.set_defaults(fn=_cmd_classify)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0,) else 0
    try:
        return args.fn(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except LfkError as err:
        return _reject(f"{type(err).__name__}: {err}")


if __name__ == "__main__":
    sys.exit(main())
