"""Line-oriented instance files and the verification front-end.

Grammar (one declaration per line, `#` comments):

    ring NAME = QQ[a, g]            or  Fp(5)[x, y]
    rels NAME = (p1, p2, ...)       attach relations to a declared ring
    ideal NAME in RING = (g1, ...)
    elem NAME in RING = poly
    center NAME on RING = [IDEAL / a], [IDEAL2 / b], ...
    hom NAME : RING1 -> RING2 = (img1, img2, ...)
    filtration NAME = group SL(2), p=2, N=4, (e, 1), (T, 2)
    request CMD args...

Commands: present, check, iso <name>, oracle, universal, congruence,
rost (see README for per-command arguments).  Reports have a human
section and a machine section of sorted `key: value` lines; exit codes:
0 all certificates pass, 1 a verification failed, 2 parse error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import re
import sys
from concurrent.futures import ThreadPoolExecutor

from . import congruence as cg
from . import oracle as oc
from .algebras import AlgebraHom, PresentedAlgebra
from .dilatation import (
    Center,
    MultiCenter,
    check_exceptional,
    conic_iso,
    base_change_compare,
    detect_common_base,
    dilate,
    forget_map,
    iterate_iso,
    localize_compare,
    monopoly_iso,
    open_immersion_iso,
    two_stage_iso,
    universal_factor,
)
from .groebner import ResourceLimitError
from .ideals import IdealHandle
from .poly import Field, InputError, PolyRing, Polynomial, QQ, format_poly
from .report import Report
from .rost import RostInput, rost_space, rost_subalgebra_check

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_RESOURCE = 3


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class InstanceFile:
    def __init__(self, path: str):
        self.path = path
        self.rings: dict[str, PresentedAlgebra] = {}
        self.ideals: dict[str, tuple[str, IdealHandle]] = {}
        self.elems: dict[str, tuple[str, Polynomial]] = {}
        self.centers: dict[str, tuple[str, MultiCenter]] = {}
        self.homs: dict[str, AlgebraHom] = {}
        self.filtrations: dict[str, tuple[cg.FiltrationSpec, cg.LevelRing]] = {}
        self.requests: list[tuple[int, list[str]]] = []


_RING_RE = re.compile(r"(QQ|Fp\((\d+)\))\s*\[([^\]]*)\]\s*\Z")


def _split_top(text: str, sep: str = ","):
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        parts.append(tail)
    return parts


def parse(path: str) -> InstanceFile:
    inst = InstanceFile(path)
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            _parse_line(inst, line)
        except ParseError:
            raise
        except (InputError, ValueError, KeyError) as exc:
            raise ParseError(no, str(exc)) from exc
    return inst


def _get_ring(inst: InstanceFile, name: str) -> PresentedAlgebra:
    if name not in inst.rings:
        raise InputError(f"undeclared ring {name!r}")
    return inst.rings[name]


def _parse_line(inst: InstanceFile, line: str) -> None:
    head, _, rest = line.partition(" ")
    rest = rest.strip()
    if head == "ring":
        name, _, spec = rest.partition("=")
        name = name.strip()
        m = _RING_RE.match(spec.strip())
        if not m:
            raise InputError(f"bad ring declaration {spec.strip()!r}")
        field = QQ if m.group(1) == "QQ" else Field(int(m.group(2)))
        names = [v.strip() for v in m.group(3).split(",") if v.strip()]
        inst.rings[name] = PresentedAlgebra(PolyRing(field, names))
    elif head == "rels":
        name, _, spec = rest.partition("=")
        alg = _get_ring(inst, name.strip())
        gens = _parse_poly_list(alg.ring, spec.strip())
        inst.rings[name.strip()] = PresentedAlgebra(alg.ring, IdealHandle(alg.ring, gens))
    elif head == "ideal":
        decl, _, spec = rest.partition("=")
        m = re.match(r"(\w+)\s+in\s+(\w+)\s*\Z", decl.strip())
        if not m:
            raise InputError(f"bad ideal declaration {decl.strip()!r}")
        alg = _get_ring(inst, m.group(2))
        gens = _parse_poly_list(alg.ring, spec.strip())
        inst.ideals[m.group(1)] = (m.group(2), IdealHandle(alg.ring, gens))
    elif head == "elem":
        decl, _, spec = rest.partition("=")
        m = re.match(r"(\w+)\s+in\s+(\w+)\s*\Z", decl.strip())
        if not m:
            raise InputError(f"bad elem declaration {decl.strip()!r}")
        alg = _get_ring(inst, m.group(2))
        inst.elems[m.group(1)] = (m.group(2), alg.ring.parse(spec.strip()))
    elif head == "center":
        decl, _, spec = rest.partition("=")
        m = re.match(r"(\w+)\s+on\s+(\w+)\s*\Z", decl.strip())
        if not m:
            raise InputError(f"bad center declaration {decl.strip()!r}")
        alg = _get_ring(inst, m.group(2))
        centers = []
        for part in _split_top(spec.strip()):
            pm = re.match(r"\[\s*(\w+)\s*/\s*(.+?)\s*\]\Z", part)
            if not pm:
                raise InputError(f"bad center pair {part!r}")
            iname = pm.group(1)
            if iname not in inst.ideals or inst.ideals[iname][0] != m.group(2):
                raise InputError(f"undeclared ideal {iname!r} on ring {m.group(2)!r}")
            elem_text = pm.group(2)
            if elem_text in inst.elems and inst.elems[elem_text][0] == m.group(2):
                elem = inst.elems[elem_text][1]
            else:
                elem = alg.ring.parse(elem_text)
            centers.append(Center(inst.ideals[iname][1], elem))
        inst.centers[m.group(1)] = (m.group(2), MultiCenter(alg, centers))
    elif head == "hom":
        decl, _, spec = rest.partition("=")
        m = re.match(r"(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s*\Z", decl.strip())
        if not m:
            raise InputError(f"bad hom declaration {decl.strip()!r}")
        src = _get_ring(inst, m.group(2))
        tgt = _get_ring(inst, m.group(3))
        images = _parse_poly_list(tgt.ring, spec.strip())
        inst.homs[m.group(1)] = AlgebraHom(src, tgt, images)
    elif head == "filtration":
        name, _, spec = rest.partition("=")
        parts = _split_top(spec.strip())
        if not parts or not parts[0].startswith("group"):
            raise InputError("filtration must start with `group GL(n)` or `group SL(n)`")
        gm = re.match(r"group\s+(GL|SL)\((\d+)\)\Z", parts[0].strip())
        if not gm:
            raise InputError(f"bad group {parts[0]!r}")
        spec_g = cg.GroupSpec(gm.group(1), int(gm.group(2)))
        p = n_level = None
        entries = []
        for part in parts[1:]:
            part = part.strip()
            if part.startswith("p"):
                p = int(part.split("=")[1])
            elif part.startswith("N"):
                n_level = int(part.split("=")[1])
            else:
                em = re.match(r"\(\s*([\w(),]+?)\s*,\s*(\d+)\s*\)\Z", part)
                if not em:
                    raise InputError(f"bad filtration entry {part!r}")
                entries.append((em.group(1), int(em.group(2))))
        if p is None or n_level is None:
            raise InputError("filtration needs p=<prime> and N=<level>")
        inst.filtrations[name.strip()] = (
            cg.FiltrationSpec(spec_g, entries),
            cg.LevelRing(p, n_level),
        )
    elif head == "request":
        inst.requests.append((len(inst.requests) + 1, rest.split()))
    else:
        raise InputError(f"unknown declaration {head!r}")


def _parse_poly_list(ring: PolyRing, text: str):
    if not (text.startswith("(") and text.endswith(")")):
        raise InputError(f"expected parenthesized list, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return []
    return [ring.parse(part) for part in _split_top(inner)]


# ---------------------------------------------------------------------------
# report rendering


def report_poly(f: Polynomial) -> str:
    """Canonical relation print: ascending terms, lowest coefficient
    positive over QQ (an ideal generator is canonical up to sign)."""
    if not f.terms:
        return "0"
    if f.ring.field.is_rational:
        key = f.ring.order.key
        lowest = min(f.terms, key=key)
        if f.terms[lowest] < 0:
            f = -f
    return format_poly(f, ascending=True)


class RequestResult:
    def __init__(self, label: str, machine: dict, human: list, ok: bool):
        self.label = label
        self.machine = machine
        self.human = human
        self.ok = ok


def _report_result(label: str, rep: Report, extra: dict | None = None) -> RequestResult:
    machine = {f"{label}.{k}": ("pass" if ok else "fail") for k, ok, _ in rep.clauses}
    machine[label] = "pass" if rep.ok else "fail"
    if extra:
        machine.update(extra)
    human = [f"{label}: {'pass' if rep.ok else 'FAIL'}"]
    for k, d in rep.failures():
        human.append(f"  failed {k}: {d}")
    return RequestResult(label, machine, human, rep.ok)


def _center(inst: InstanceFile, name: str) -> MultiCenter:
    if name not in inst.centers:
        raise InputError(f"undeclared center {name!r}")
    return inst.centers[name][1]


def _kv_args(args):
    out = {}
    for a in args:
        if "=" in a:
            k, v = a.split("=", 1)
            out[k] = v
    return out


def run_request(inst: InstanceFile, args: list[str], flags) -> RequestResult:
    cmd = args[0]
    if cmd == "present":
        center = _center(inst, args[1])
        res = dilate(center)
        rels = ", ".join(report_poly(g) for g in res.algebra.relations.groebner())
        machine = {
            "relations": rels,
            "zero_ring": "true" if res.is_zero_ring() else "false",
            "saturation_changed": "true" if res.saturation_changed else "false",
            "variables": ", ".join(res.algebra.ring.names),
        }
        human = [f"present {args[1]}: A' = {res.algebra!r}"]
        return RequestResult("present", machine, human, True)

    if cmd == "check":
        center = _center(inst, args[1])
        res = dilate(center)
        if res.is_zero_ring():
            nil = center.algebra.relations.radical_contains(center.product_elem())
            machine = {"zero_ring": "true", "zero_criterion": "pass" if nil else "fail"}
            return RequestResult("check", machine, ["check: zero ring (asserted)"], nil)
        extra = []
        for name in args[2:]:
            if name not in inst.elems:
                raise InputError(f"undeclared element {name!r}")
            ring_name, poly = inst.elems[name]
            if ring_name != inst.centers[args[1]][0]:
                raise InputError(f"element {name!r} lives on ring {ring_name!r}, not the center's ring")
            extra.append(poly)
        rep = check_exceptional(res, extra)
        out = _report_result("check", rep, {"zero_ring": "false"})
        return out

    if cmd == "iso":
        sub = args[1]
        center = _center(inst, args[2])
        kv = _kv_args(args[3:])
        if sub == "monopoly":
            _, _, rep = monopoly_iso(center)
            return _report_result("monopoly", rep)
        if sub == "two-stage":
            keep = [int(x) for x in kv.get("K", "1").split(",")]
            _, rep = two_stage_iso(center, keep)
            return _report_result("two_stage", rep)
        if sub == "localize":
            return _report_result("localize", localize_compare(center))
        if sub == "open-immersion":
            keep = [int(x) for x in kv.get("K", "1").split(",")]
            assign = {}
            for pair in kv.get("map", "").split(","):
                if pair:
                    a, b = pair.split(":")
                    assign[int(a)] = int(b)
            return _report_result("open_immersion", open_immersion_iso(center, keep, assign))
        if sub == "iterate":
            t = int(kv.get("t", "1"))
            det = detect_common_base(center)
            if det is None:
                raise InputError("iterate needs a single-divisor center")
            base, exps = det
            gens = [list(c.ideal.gens) for c in center.centers]
            rep = iterate_iso(center.algebra, base, gens, exps, t)
            return _report_result("iterate", rep)
        if sub == "conic":
            return _report_result("conic", conic_iso(center))
        if sub == "base-change":
            hom = inst.homs[args[3]]
            return _report_result("base_change", base_change_compare(center, hom))
        if sub == "forget":
            keep = [int(x) for x in kv.get("K", "1").split(",")]
            _, rep = forget_map(dilate(center), keep)
            return _report_result("forget", rep)
        raise InputError(f"unknown iso verifier {sub!r}")

    if cmd == "oracle":
        center = _center(inst, args[1])
        rep = oc.compare_with_symbolic(center.algebra, center, flags.oracle_size_cap)
        return _report_result("oracle", rep)

    if cmd == "universal":
        center = _center(inst, args[1])
        if len(args) > 2 and args[2] == "scan":
            base_ring, var_map = oc.from_presented(center.algebra, flags.oracle_size_cap)
            fc = oc.FiniteCenter.from_gens(
                base_ring,
                [
                    (
                        [oc.eval_poly(g, var_map, base_ring) for g in c.ideal.gens],
                        oc.eval_poly(c.elem, var_map, base_ring),
                    )
                    for c in center.centers
                ],
            )
            catalog = [oc.zmod(n) for n in range(1, 13)]
            rep = oc.universal_property_scan(base_ring, fc, catalog)
            return _report_result("universal_scan", rep)
        hom = inst.homs[args[2]]
        out = universal_factor(center, hom)
        if out.refused:
            machine = {"universal": "refused", "universal.reason": out.reason}
            return RequestResult("universal", machine, [f"universal: refused ({out.reason})"], True)
        return _report_result("universal", out.report)

    if cmd == "congruence":
        sub = args[1]
        if sub == "iso":
            fs, ring_s = inst.filtrations[args[2]]
            fr, ring_r = inst.filtrations[args[3]]
            if fs.names() != fr.names() or ring_s.mod != ring_r.mod:
                raise InputError("filtrations for iso must share group, names, p and N")
            rep = cg.congruent_iso_check(fs, fs.levels(), fr.levels(), ring_s)
            return _report_result("congruence_iso", rep)
        if sub == "points":
            filt, ring = inst.filtrations[args[2]]
            pts = cg.group_points(filt, ring)
            lie = cg.lie_points(filt, ring)
            machine = {
                "congruence_points.group_order": str(len(pts)),
                "congruence_points.lie_order": str(len(lie)),
            }
            return RequestResult(
                "congruence_points",
                machine,
                [f"points: |group| = {len(pts)}, |lie| = {len(lie)}"],
                True,
            )
        if sub == "normalizer":
            filt, ring = inst.filtrations[args[2]]
            kv = _kv_args(args[3:])
            rep = cg.normalizer_check(filt, kv.get("K", "Z"), ring)
            hypothesis_failed = any(
                k.startswith("commutes") and not ok for k, ok, _ in rep.clauses
            )
            if hypothesis_failed:
                machine = {f"normalizer.{k}": ("pass" if ok else "fail") for k, ok, _ in rep.clauses}
                machine["normalizer"] = "hypothesis-failed"
                return RequestResult(
                    "normalizer", machine, ["normalizer: hypothesis failed (reported)"], True
                )
            return _report_result("normalizer", rep)
        raise InputError(f"unknown congruence verifier {sub!r}")

    if cmd == "rost":
        ring_name = args[1]
        alg = _get_ring(inst, ring_name)
        iname, jname = args[2], args[3]
        kv = _kv_args(args[4:])
        data = RostInput(alg, inst.ideals[iname][1], inst.ideals[jname][1])
        res = rost_space(data)
        rep = rost_subalgebra_check(data, int(kv.get("bound", flags.bidegree_bound)))
        rels = ", ".join(report_poly(g) for g in res.algebra.relations.groebner())
        return _report_result("rost", rep, {"rost.relations": rels})

    raise InputError(f"unknown request {cmd!r}")


def run(inst: InstanceFile, flags) -> tuple[str, int]:
    results: list[RequestResult | Exception] = [None] * len(inst.requests)

    def work(idx_args):
        idx, args = idx_args
        try:
            return idx, run_request(inst, args, flags)
        except Exception as exc:  # collected and re-raised in order
            return idx, exc

    if flags.jobs > 1:
        with ThreadPoolExecutor(max_workers=flags.jobs) as pool:
            for idx, out in pool.map(work, inst.requests):
                results[idx - 1] = out
    else:
        for idx, out in map(work, inst.requests):
            results[idx - 1] = out

    human: list[str] = []
    machine: dict[str, str] = {}
    ok = True
    label_counts: dict[str, int] = {}
    for out in results:
        if isinstance(out, (ResourceLimitError, oc.SizeCapError)):
            raise out
        if isinstance(out, Exception):
            raise out
        label_counts[out.label] = label_counts.get(out.label, 0) + 1
        suffix = "" if label_counts[out.label] == 1 else f"#{label_counts[out.label]}"
        human.extend(out.human)
        for k, v in out.machine.items():
            machine[k + suffix if suffix else k] = v
        ok = ok and out.ok

    lines = []
    if not flags.machine_only:
        lines.append("== report ==")
        lines.extend(human)
        lines.append("== machine ==")
    for k in sorted(machine):
        lines.append(f"{k}: {machine[k]}")
    return "\n".join(lines) + "\n", (EXIT_PASS if ok else EXIT_FAIL)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="dilat", description="dilatation verifier")
    parser.add_argument("instance", help="instance file")
    parser.add_argument("--degree-cap", type=int, default=24)
    parser.add_argument("--pair-cap", type=int, default=200_000)
    parser.add_argument("--oracle-size-cap", type=int, default=oc.SIZE_CAP)
    parser.add_argument("--bidegree-bound", type=int, default=4)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--machine-only", action="store_true")
    flags = parser.parse_args(argv)

    import dilatations.groebner as gb

    gb.DEFAULT_LIMITS.degree_cap = flags.degree_cap
    gb.DEFAULT_LIMITS.pair_cap = flags.pair_cap

    try:
        inst = parse(flags.instance)
    except (ParseError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        text, code = run(inst, flags)
    except (ResourceLimitError, oc.SizeCapError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, KeyError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
