"""Acceptance suite: ten criteria, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` (the lines are printed even
without ``-s``) or ``python tests/test_acceptance.py``.
"""

import json
import sys
import time

import pytest

from cocenter.affine import build_affine
from cocenter.cli import JobConfig, run
from cocenter.conjugacy import ConjugacyTable, newton_zero_classes, verify_gp, verify_param_bijection
from cocenter.coxeter import build_group, conjugacy_classes
from cocenter.exactscalar import QQ
from cocenter.hecke import CocenterReducer, HeckeAlgebra, cocenter_reduce, newton_zero_subspace
from cocenter.repmod import character, finite_hecke, simples, trace_pairing_matrix


def report(request, number, ok, detail, started):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}  ({time.time() - started:.1f}s)"
    capman = request.config.pluginmanager.getplugin("capturemanager") if request else None
    if capman:
        with capman.global_and_fixture_disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


def _ranktable(preset, phi=None):
    text, code = run(JobConfig("ranktable", preset=preset, phi=phi))
    return json.loads(text)["values"], code


def test_criterion_01_sl3_rank_table(request):
    t = time.time()
    values, code = _ranktable("SL3")
    ok = code == 0 and values == [[3, 3], [0, 0]] and time.time() - t < 60
    report(request, 1, ok, f"SL3 rank table {values}", t)


def test_criterion_02_pgl3_rank_table(request):
    t = time.time()
    values, code = _ranktable("PGL3")
    ok = code == 0 and values == [[3, 1], [2, 0]] and time.time() - t < 60
    # rows are Phi_3; the literal Phi_2 rows are shown for comparison
    literal, _ = _ranktable("PGL3", phi=2)
    report(request, 2, ok, f"PGL3 rank table {values} (Phi_3 rows; Phi_2 rows give {literal})", t)


def test_criterion_03_finite_gp_paths(request):
    t = time.time()
    bad, checked = 0, 0
    for name in ["A2", "B2", "G2", "A1xA1", "A3", "B3"]:
        r = verify_gp(ConjugacyTable(build_group(name)))
        bad += len(r["failures"])
        checked += r["checked"]
    ok = bad == 0 and checked == 6 + 8 + 12 + 4 + 24 + 48
    report(request, 3, ok, f"{checked} elements, {bad} counterexamples", t)


def test_criterion_04_affine_gp_paths(request):
    t = time.time()
    bad, checked = 0, 0
    for name in ["SL2", "PGL2", "SL3"]:
        r = verify_gp(ConjugacyTable(build_affine(name), 10), max_length=10, closed_only=True)
        bad += len(r["failures"])
        checked += r["checked"]
    report(request, 4, bad == 0 and checked > 0, f"{checked} elements, {bad} counterexamples", t)


def test_criterion_05_finite_duality(request):
    t = time.time()
    dets, ok = {}, True
    for name in ["A2", "B2"]:
        tp = trace_pairing_matrix(finite_hecke(name, 25))
        ok = ok and tp.square and tp.invertible
        dets[name] = str(tp.determinant())
    report(request, 5, ok, f"determinants at q=5: {dets}", t)


def test_criterion_06_confluence(request):
    t = time.time()
    bad, checked = 0, 0
    for group, L in [(build_group("A2"), None), (build_group("B2"), None), (build_affine("SL2"), 10)]:
        H = HeckeAlgebra(group)
        red = CocenterReducer(H, ConjugacyTable(group, L))
        for c in red.table.closed_classes():
            for w in c.members_in_ball:
                if H.view.length(w) <= 6:
                    checked += 1
                    bad += not red.confluence(w)[0]
    report(request, 6, bad == 0, f"{checked} basis elements, {bad} disagreements", t)


def test_criterion_07_trace_compatibility(request):
    t = time.time()
    bad, checked = 0, 0
    for name in ["A2", "B2"]:
        A = finite_hecke(name, 25)
        W = A.group
        gen = HeckeAlgebra(W)
        spec = HeckeAlgebra(W, values={v: QQ(5) for v in gen.variables})
        table = ConjugacyTable(W)
        red = CocenterReducer(gen, table)
        mods = simples(A).modules
        for w in W:
            if W.length(w) > 6:
                continue
            f = {k: gen.specialize_scalar(c, spec) for k, c in red.reduce_basis(w).terms.items()}
            for V in mods:
                checked += 1
                rhs = sum((c * character(V, min(table[k].min_elements)) for k, c in f.items()), QQ(0))
                bad += character(V, w) != rhs
    report(request, 7, bad == 0, f"{checked} (w, V) pairs, {bad} mismatches", t)


def test_criterion_08_parametrization(request):
    t = time.time()
    failures = 0
    for name in ["SL2", "PGL2"]:
        r = verify_param_bijection(build_affine(name), 8)
        failures += len(r["collisions"]) + len(r["missed"]) + len(r["failures"])
    report(request, 8, failures == 0, f"{failures} assertion failures", t)


def test_criterion_09_newton_zero_count(request):
    t = time.time()
    counts = {}
    for name, L in [("SL2", 8), ("PGL2", 8), ("SL3", 6)]:
        G = build_affine(name)
        counts[name] = (len(newton_zero_subspace(HeckeAlgebra(G), L)), len(newton_zero_classes(G, L)))
    ok = all(a == b for a, b in counts.values())
    report(request, 9, ok, f"(hecke, conjugacy) counts {counts}", t)


def test_criterion_10_group_algebra_baseline(request):
    t = time.time()
    W = build_group("A2")
    A = finite_hecke(W, 1)
    res = simples(A)
    tp = trace_pairing_matrix(A)
    H = HeckeAlgebra(W, values={"q": QQ(1)})
    table = ConjugacyTable(W)
    reduce_ok = all(cocenter_reduce(H.T(w), table).terms == {table.class_index(w): QQ(1)} for w in W)
    ok = (
        len(conjugacy_classes(W)) == 3
        and sorted(m.dimension for m in res.modules) == [1, 1, 2]
        and tp.square
        and len(tp.rows) == 3
        and tp.invertible
        and reduce_ok
    )
    report(request, 10, ok, f"dims {sorted(m.dimension for m in res.modules)}, det {tp.determinant()}", t)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
