"""Acceptance criteria, each checked exactly against an independent recomputation."""

import json
import math
import random
import time
from fractions import Fraction

import pytest

from alpha_cut import Instance, PointRef
from alpha_cut.certificates import colorful_to_partition, partition_to_colorful
from alpha_cut.cli import main
from alpha_cut.lp import convex_combination
from alpha_cut.oracle import check_weak_general_position, check_well_separation, find_cut_bruteforce
from alpha_cut.reduction import Codec, scan_line
from alpha_cut.rotation import Rotated, alpha_vector_of, natural_plane, next_rotate, plane_through
from alpha_cut.solver import solve

from helpers import NOSEP, all_targets, corpus, corpus_solutions, cut_tables


# --- independent exact helpers ------------------------------------------------


def frac_rank(rows):
    a = [[Fraction(v) for v in row] for row in rows]
    r = 0
    for c in range(len(a[0]) if a else 0):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def frac_affine_rank(pts):
    return frac_rank([[Fraction(a) - Fraction(b) for a, b in zip(p, pts[0])] for p in pts[1:]]) if len(pts) > 1 else 0


def combination_of(inst, side):
    """Exact point of a GV2 side [{"point": [c, i], "coef": "p/q"}] plus its color set."""
    coefs = [Fraction(item["coef"]) for item in side]
    assert all(c >= 0 for c in coefs) and sum(coefs) == 1
    refs = [PointRef(*item["point"]) for item in side]
    pt = tuple(sum(c * inst.point(r)[k] for c, r in zip(coefs, refs)) for k in range(inst.d))
    return pt, {r.color for r in refs}


def check_gv2_doc(inst, doc):
    assert doc["kind"] == "GV2"
    i_set, j_set = set(doc["I"]), set(doc["J"])
    assert i_set and j_set and not i_set & j_set and i_set | j_set <= set(range(1, inst.d + 1))
    point = tuple(Fraction(c) for c in doc["point"])
    lam_pt, lam_colors = combination_of(inst, doc["lambda"])
    mu_pt, mu_colors = combination_of(inst, doc["mu"])
    assert lam_colors <= i_set and mu_colors <= j_set
    assert lam_pt == point and mu_pt == point


def check_gv1_doc(inst, doc):
    assert doc["kind"] == "GV1"
    refs = [PointRef(*r) for r in doc["points"]]
    d = inst.d
    assert len(set(refs)) == d + 1
    assert len({r.color for r in refs}) >= d - 1
    pts = [inst.point(r) for r in refs]
    assert frac_affine_rank(pts) <= d - 1
    normal = [Fraction(c) for c in doc["normal"]]
    offset = Fraction(doc["offset"])
    assert any(normal)
    assert all(sum(a * b for a, b in zip(normal, p)) == offset for p in pts)


def run_cli(argv, out_path):
    code = main(argv + ["--output", str(out_path)])
    return code, json.loads(out_path.read_text())


def increasing(xs):
    return all(a < b for a, b in zip(xs, xs[1:]))


# --- criteria ---------------------------------------------------------------


def test_criterion_01_cut_tables_are_bijections():
    start = time.perf_counter()
    tables = cut_tables()
    assert len(tables) >= 200
    for inst, table in zip(corpus(), tables):
        assert inst.d in (2, 3) and max(inst.sizes) <= 6
        alphas = [entry[0] for entry in table.cuts.values()]
        assert len(set(alphas)) == len(alphas)
        assert sorted(alphas) == sorted(all_targets(inst.sizes))
        assert table.is_bijection()
    assert time.perf_counter() - start < 60


def test_criterion_02_solver_matches_oracle(tmp_path, tmp_instance):
    start = time.perf_counter()
    solutions = corpus_solutions()
    for (i, target), result in solutions.items():
        cert = result.certificate
        assert cert.kind == "G1", (i, target, cert.reason)
        want = cut_tables()[i].by_alpha(target)
        assert len(want) == 1
        assert tuple(sorted(cert.refs)) == tuple(sorted(want[0]))
    # the CLI agrees on one target per instance
    rnd = random.Random(7)
    for i, inst in enumerate(corpus()):
        target = rnd.choice(all_targets(inst.sizes))
        path = tmp_instance(inst.with_alpha(target))
        code, doc = run_cli(["solve", "--input", path, "--seed", str(i)], tmp_path / "out.json")
        assert code == 0 and doc["kind"] == "G1"
        assert sorted(map(tuple, doc["points"])) == sorted(cut_tables()[i].by_alpha(target)[0])
        assert tuple(doc["alpha"]) == target
    assert time.perf_counter() - start < 300


def test_criterion_03_potential_and_distance_increase():
    walks = 0
    for result in corpus_solutions().values():
        for phase in ("bootstrap", "forward"):
            recs = [r for r in result.trace if r["phase"] == phase]
            if not recs:
                continue
            walks += 1
            assert increasing([r["potential"] for r in recs])
            # the bootstrap line walks its canonical path backwards, so read it in path order
            path = recs[::-1] if phase == "bootstrap" else recs
            run = []
            for rec in path + [None]:
                if rec is not None and rec["class"] == "non-colorful":
                    run.append(Fraction(rec["dist_sq"]))
                    continue
                assert increasing(run)
                run = []
    assert walks > 0


def _scan_ok(proc):
    got = scan_line(proc)
    return got["starts"] == [0] and len(got["U1"]) == 1 and not got["UV1"] and not got["UV2"] and not got["UV3"]


def test_criterion_04_lines_hold_one_solution():
    rnd = random.Random(11)
    small = [inst for inst in corpus() if inst.d == 2][:12]
    mid = [inst for inst in corpus() if inst.d == 3 and inst.n0 <= 4][:3]
    wide = [inst for inst in corpus() if inst.d == 3 and inst.n0 == 6][:1]
    jobs = [(inst, all_targets(inst.sizes)) for inst in small]
    jobs += [(inst, rnd.sample(all_targets(inst.sizes), 2)) for inst in mid]
    jobs += [(inst, [inst.sizes]) for inst in wide]
    scanned = 0
    for inst, targets in jobs:
        assert Codec(inst.d, inst.sizes).kappa <= 20
        for target in targets:
            start = time.perf_counter()
            result = solve(inst.with_alpha(target))
            lines = [p for p in (result.bootstrap.proc if result.bootstrap else None, result.proc) if p]
            for proc in lines:
                assert _scan_ok(proc), (inst.sizes, target)
                scanned += 1
            assert time.perf_counter() - start < 120
    assert scanned > 0


def test_criterion_05_rotation_runs_step_the_grid():
    runs = 0
    for inst, table in zip(corpus(), cut_tables()):
        d = inst.d
        for tup, (alpha, _, _) in table.cuts.items():
            for j in range(1, d + 1):
                if alpha[j - 1] > inst.sizes[j - 1] - 1:
                    continue
                anchor = tuple(r for r in tup if r.color != j)
                pivot = next(r for r in tup if r.color == j)
                want = tuple(a + (k == j - 1) for k, a in enumerate(alpha))
                runs += 1
                for _ in range(inst.n * inst.n):
                    got = next_rotate(anchor, pivot, inst)
                    assert isinstance(got, Rotated)
                    anchor, pivot = got.anchor, got.pivot
                    if got.hit.color == j:
                        break
                else:
                    pytest.fail("rotation run never became colorful")
                refs = tuple(sorted(anchor + (pivot,)))
                # the oracle's own plane through the reached tuple
                assert table.cuts[refs][0] == want
                assert alpha_vector_of(natural_plane(inst, anchor, pivot), inst) == want
    assert runs > 1000


def nested_instance(rnd):
    side = rnd.randint(9, 30)
    outer = [(0, 0), (side, 0), (0, side)]
    for _ in range(rnd.randint(0, 2)):
        x = rnd.randint(1, side // 3)
        outer.append((x, rnd.randint(1, side // 3)))
    inner = set()
    while len(inner) < rnd.randint(2, 4):
        x, y = rnd.randint(1, side - 2), rnd.randint(1, side - 2)
        if x + y < side and (x, y) not in outer:
            inner.add((x, y))
    return Instance(2, (tuple(outer), tuple(sorted(inner))), (1, 1))


def test_criterion_06_nested_hulls_give_gv2(tmp_path, tmp_instance):
    rnd = random.Random(3)
    cases = [(NOSEP, t) for t in all_targets(NOSEP.sizes) if not find_cut_bruteforce(NOSEP, t)[0]]
    while len(cases) < 25:
        inst = nested_instance(rnd)
        if check_weak_general_position(inst) is not None:
            continue
        absent = [t for t in all_targets(inst.sizes) if not find_cut_bruteforce(inst, t)[0]]
        if absent:
            cases.append((inst, rnd.choice(absent)))
    assert (NOSEP, (1, 1)) in cases
    for inst, target in cases:
        inst = inst.with_alpha(target)
        code, doc = run_cli(["solve", "--input", tmp_instance(inst)], tmp_path / "cert.json")
        assert code == 3, (inst, target)
        check_gv2_doc(inst, doc)


def degenerate_instance(rnd, d):
    """Points of at least d-1 colors on the floor plane, every other point strictly above."""
    if d == 2:
        floor = [[(0, 0), (1, 0)], [(20, 0)]]
        boxes = [((0, 10),), ((20, 30),)]
    else:
        floor = [[(0, 0, 0), (2, 1, 0)], [(30, 0, 0)], [(0, 30, 0)]]
        boxes = [((0, 9), (0, 9)), ((30, 40), (0, 9)), ((0, 9), (30, 40))]
    colors = []
    for c in range(d):
        pts = list(floor[c])
        for _ in range(rnd.randint(0, 3)):
            lifted = tuple(rnd.randint(*b) for b in boxes[c]) + (rnd.randint(1, 10),)
            if lifted not in pts:
                pts.append(lifted)
        colors.append(tuple(pts))
    inst = Instance(d, tuple(colors), (1,) * d)
    full = tuple(len(c) for c in colors)
    floor_tuple = tuple(PointRef(c, 0) for c in range(1, d + 1))
    if alpha_vector_of(plane_through(inst, floor_tuple), inst) != full:
        # mirror so the floor plane faces the lifted points
        colors = [tuple(p[:-1] + (-p[-1],) for p in pts) for pts in colors]
        inst = Instance(d, tuple(colors), (1,) * d)
    assert alpha_vector_of(plane_through(inst, floor_tuple), inst) == full
    return inst.with_alpha(full)


def test_criterion_07_degenerate_instances_give_gv1(tmp_path, tmp_instance):
    rnd = random.Random(5)
    for k in range(30):
        inst = degenerate_instance(rnd, 2 if k % 2 else 3)
        assert check_well_separation(inst) is None
        code, doc = run_cli(["solve", "--input", tmp_instance(inst), "--seed", str(k)], tmp_path / "cert.json")
        assert code == 2, inst
        check_gv1_doc(inst, doc)


def overlapping_instance(rnd):
    d = rnd.choice((2, 3))
    colors = []
    for c in range(d):
        pts = set()
        while len(pts) < rnd.randint(2, 4):
            pts.add(tuple(rnd.randint(0, 12) for _ in range(d)))
        colors.append(tuple(sorted(pts)))
    return Instance(d, tuple(colors), (1,) * d)


def test_criterion_08_partition_round_trip():
    rnd = random.Random(8)
    done = 0
    while done < 100:
        inst = overlapping_instance(rnd)
        bad = check_well_separation(inst)
        if bad is None:
            continue
        i_set, j_set, _ = bad
        pts = partition_to_colorful(inst, i_set, j_set, seed=done)
        assert len(pts) == inst.d
        assert frac_affine_rank(pts) <= inst.d - 2
        for color, p in enumerate(pts, start=1):
            hull = [inst.point(r) for r in inst.refs(color)]
            coefs = convex_combination(p, hull)
            assert coefs is not None
            assert all(c >= 0 for c in coefs) and sum(coefs) == 1
            assert tuple(sum(Fraction(c) * q[k] for c, q in zip(coefs, hull)) for k in range(inst.d)) == tuple(p)
        cert = colorful_to_partition(inst, pts, seed=done)
        check_gv2_doc(inst, cert.to_doc())
        # the recovered partition is itself a violation
        assert len(partition_to_colorful(inst, cert.i_set, cert.j_set)) == inst.d
        done += 1


def test_criterion_09_distance_gap_and_bound():
    planes = 0
    for result in corpus_solutions().values():
        lines = {"bootstrap": result.bootstrap.proc if result.bootstrap else None, "forward": result.proc}
        for rec in result.trace:
            proc = lines[rec["phase"]]
            if rec["class"] is None:
                continue
            w = proc.info(int(rec["vertex_bits"], 2))
            big_n, big_m = proc.inst.big_n, proc.inst.big_m
            x, y = proc.inst.point(w.x), proc.inst.point(w.y)
            length_sq = sum((a - b) ** 2 for a, b in zip(x, y))
            assert Fraction(w.dist_sq) <= big_m**2
            if rec["class"] != "non-colorful":
                continue
            d_p_sq, d_q_sq = w.t_p**2 * length_sq, w.t_q**2 * length_sq
            assert d_p_sq <= big_m**2 and d_q_sq <= big_m**2
            # |D_q - D_p| >= 1/N^2, squared on both sides
            assert (w.t_q - w.t_p) ** 2 * length_sq * big_n**4 >= 1
            # same gap on squares: D_q^2 - D_p^2 = (D_q - D_p)(D_q + D_p)
            gap_sq = abs(d_q_sq - d_p_sq)
            assert gap_sq**2 * big_n**4 >= (d_p_sq + d_q_sq + 2 * abs(w.t_p * w.t_q) * length_sq)
            planes += 1
    assert planes > 0


def test_criterion_10_encoding_round_trip():
    rnd = random.Random(10)
    shapes = sorted({(inst.d, inst.sizes) for inst in corpus()})
    for d, n0 in sorted({(d, max(s)) for d, s in shapes}):
        want = 3 * math.ceil(math.log2(d)) + (d + 1) * math.ceil(math.log2(n0))
        assert Codec(d, (n0,) * d).kappa == want
    for _ in range(10**5):
        d, sizes = rnd.choice(shapes)
        codec = Codec(d, sizes)
        t1 = rnd.randint(1, d)
        anchor = tuple(PointRef(c, rnd.randrange(sizes[c - 1])) for c in range(1, d + 1) if c != t1)
        p, q = (PointRef(c, rnd.randrange(sizes[c - 1])) for c in (rnd.randint(1, d), rnd.randint(1, d)))
        v = codec.encode(anchor, p, q)
        assert 0 <= v < 2**codec.kappa
        assert codec.decode(v) == (anchor, p, q)
