import json
from pathlib import Path

import mpmath
import pytest

from curvelab.arith import Dyadic
from curvelab.poly import IntPoly1, parse_poly, shear
from curvelab.topology import (
    TopologyError,
    admissible_shears,
    choose_shear,
    classify_local,
    critical_data,
    curve_topology,
    fiber_count,
    intermediate_values,
    isolate_fiber,
    preprocess,
)

FIXTURE = json.loads((Path(__file__).parent / "fixtures" / "topology_ground_truth.json").read_text())
_mp = mpmath.MPContext()
_mp.prec = 300


def test_preprocess_examples():
    c = parse_poly("x^2 + y^2 - 1")
    assert preprocess(c * c) == c
    assert preprocess(c) == c
    lines = parse_poly("y^2 - x^2")
    assert preprocess(lines) == lines
    with pytest.raises(ValueError):
        preprocess(parse_poly("7"))


def test_choose_shear_examples():
    assert choose_shear(parse_poly("x^2 + y^2 - 1")).s == 0
    assert choose_shear(parse_poly("y^2 - x^3")).s == 0
    assert choose_shear(parse_poly("x*y - 1")).s == 1
    assert choose_shear(parse_poly("y^2 - x^2")).s == 0


def test_forced_shear_must_be_admissible():
    with pytest.raises(ValueError):
        curve_topology(parse_poly("x*y - 1"), s=0)


def test_critical_data_examples():
    cd = critical_data(parse_poly("x^2 + y^2 - 1"))
    real = [k for k, s in enumerate(cd.sr.solutions) if s.real]
    assert len(real) == 2
    by_x = sorted((cd.sr.solutions[k].polydisk.dx.center.re, cd.signs[k]) for k in real)
    assert [sg for _, sg in by_x] == [-1, 1]
    assert cd.R in (IntPoly1([-4, 0, 4]), IntPoly1([4, 0, -4]))
    cd = critical_data(parse_poly("y^2 - x^3"))
    assert [cd.signs[k] for k, s in enumerate(cd.sr.solutions) if s.real] == [0]
    cd = critical_data(parse_poly("y^2 - x^2*(x + 1)"))
    signs = sorted((float(cd.sr.solutions[k].polydisk.dx.center.re), cd.signs[k])
                   for k, s in enumerate(cd.sr.solutions) if s.real)
    assert [sg for _, sg in signs] == [-1, 0]


def test_fiber_count_examples():
    assert fiber_count(2, 1, 0, False) == 1
    assert fiber_count(2, 3, 2, True) == 1
    assert fiber_count(5, 0, 0, False) == 5


def test_cusp_resultants():
    cd = critical_data(parse_poly("y^2 - x^3"))
    assert cd.R in (IntPoly1([0, 0, 0, -4]), IntPoly1([0, 0, 0, 4]))
    assert cd.Q.degree == 2 and cd.Q.coeffs[:2] == [0, 0]


def test_intermediate_values_circle():
    cd = critical_data(parse_poly("x^2 + y^2 - 1"))
    idx = cd.real_alphas()
    chosen, gs, _ = intermediate_values(cd.R, cd.sr.rootsets_x, idx)
    assert len(chosen) == 1
    g = gs.roots[chosen[0]]
    assert g.inner.center.re.to_fraction() - g.inner.radius.to_fraction() <= 0 <= \
        g.inner.center.re.to_fraction() + g.inner.radius.to_fraction()
    assert intermediate_values(cd.R, cd.sr.rootsets_x, idx[:1])[0] == []


def test_isolate_fiber_examples():
    circle = parse_poly("x^2 + y^2 - 1")
    rs, real = isolate_fiber(circle, 0)
    assert len(real) == 2 and all(r.multiplicity == 1 for r in rs)
    rs, real = isolate_fiber(circle, 1)
    assert len(rs) == 1 and rs[0].multiplicity == 2
    rs, real = isolate_fiber(parse_poly("y^2 - x^3"), 0)
    assert len(rs) == 1 and rs[0].multiplicity == 2


def test_classify_local_examples():
    assert classify_local(2, 1, 1) == 2
    assert classify_local(2, -1, 1) == 3
    assert classify_local(3, -1, 6) == 1
    with pytest.raises(ValueError):
        classify_local(2, 0, 1)


def test_circle_graph():
    g = curve_topology(parse_poly("x^2 + y^2 - 1"))
    crit = [f for f in g.fibers if f.kind == "critical"]
    assert len(crit) == 2
    assert [p.case for p in crit[0].points] == [3] and [p.case for p in crit[1].points] == [2]
    assert len(g.vertices) == 4 and len(g.edges) == 4
    assert g.degrees() == [2, 2, 2, 2]


def test_cusp_graph():
    g = curve_topology(parse_poly("y^2 - x^3"))
    (sv,) = g.singular
    assert g.degrees()[sv] == 2
    sx = g.vertices[sv][0]
    nbrs = [b if a == sv else a for a, b in g.edges if sv in (a, b)]
    assert all(g.vertices[v][0] > sx for v in nbrs)


def test_xy_minus_one_is_sheared():
    g = curve_topology(parse_poly("x*y - 1"))
    assert g.shear_s == 1
    assert g.components() == 2 and g.cycle_rank() == 0


@pytest.mark.parametrize("name", sorted(FIXTURE))
def test_corpus_matches_fixture(name):
    want = FIXTURE[name]
    g = curve_topology(parse_poly(want["poly"]))
    assert g.components() == want["components"]
    assert g.cycle_rank() == want["cycle_rank"]
    assert g.singular_degrees() == want["singular_degrees"]
    assert all(c["predicted"] == c["found"] for c in g.nalpha_checks)


@pytest.mark.parametrize("name", sorted(FIXTURE))
def test_shear_invariance(name):
    f = parse_poly(FIXTURE[name]["poly"])
    base = None
    for s in admissible_shears(preprocess(f), 3):
        g = curve_topology(f, s=s)
        inv = (g.components(), g.cycle_rank(), g.singular_degrees())
        base = base or inv
        assert inv == base


@pytest.mark.parametrize("name", ["circle", "nodal_cubic", "lemniscate", "tacnode_with_line"])
def test_refined_embedding_is_planar(name):
    if name not in FIXTURE:
        pytest.skip("not in fixture")
    g = curve_topology(parse_poly(FIXTURE[name]["poly"]), refine=40)
    assert g.crossing_edges() == []
    for fib in g.fibers:
        for p in fib.points:
            assert p.y.inner.radius < Dyadic(1, -40)


def _mp_of(d: Dyadic):
    q = d.to_fraction()
    return _mp.mpf(q.numerator) / q.denominator


@pytest.mark.parametrize("name", sorted(FIXTURE))
def test_fiber_counts_against_numeric_roots(name):
    """Distinct roots of F(alpha, y) counted by clustering mpmath roots at 300 bits."""
    g = curve_topology(parse_poly(FIXTURE[name]["poly"]))
    F = g.curve
    for fib in g.fibers:
        if fib.kind != "critical":
            continue
        fib.holder.refine(fib.index, 280)
        a = fib.holder.inner(fib.index).center
        alpha = _mp.mpc(_mp_of(a.re), _mp_of(a.im))
        coeffs = [sum(c * alpha**i for (i, j), c in F.terms.items() if j == k) for k in range(F.deg_y, -1, -1)]
        roots = _mp.polyroots(coeffs, maxsteps=20000, extraprec=600)
        clusters = []
        for z in roots:
            for cl in clusters:
                if abs(cl - z) < _mp.ldexp(1, -30):
                    break
            else:
                clusters.append(z)
        assert len(clusters) == fib.n_distinct


def test_to_json_and_dot():
    g = curve_topology(parse_poly("y^2 - x^2"))
    doc = g.to_json()
    assert set(doc) == {"vertices", "edges", "singular", "box", "shear_s"}
    assert len(doc["vertices"]) == len(g.vertices)
    assert "graph" in g.to_dot()
    assert json.loads(json.dumps(doc)) == doc
