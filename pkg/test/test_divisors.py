#!/usr/bin/env python3
"""
Cartier Divisor Tests
Cartier data, polytopes, sections, positivity and the GKZ construction
"""

import itertools
import random
import sys
import unittest
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

try:
    from src.cones import Cone
    from src.corpus import load_example
    from src.divisors import (
        check_cartier,
        convex_hull_vertices,
        divisor_polytope,
        divisors_equivalent,
        gkz_triple,
        global_sections,
        is_ample,
        is_basepoint_free,
        is_principal,
        is_very_ample,
        make_cartier,
        principal_witness,
        scale,
        support_value,
    )
    from src.errors import DegeneratePolytope, NonCompleteFan, NotCartier, UnknownCone
    from src.semigroups import is_free
    from src.variety import build_triple, normalization
except ImportError as e:
    print(f"Import error: {e}")
    print("Some dependencies may be missing. Install with: pip install -r requirements.txt")
    sys.exit(1)


PLUS = Cone.from_rays([(1,)])
MINUS = Cone.from_rays([(-1,)])


def p1_divisor(m_plus, m_minus):
    line = load_example("p1_line")
    return make_cartier(line, {PLUS: (m_plus,), MINUS: (m_minus,)})


class TestCartierData(unittest.TestCase):
    """Gluing conditions on common faces"""

    def setUp(self):
        self.mirror = load_example("mirror_umbrella")
        self.sigma = self.mirror.find_cone("sigma")
        self.lower = self.mirror.find_cone("mirror")

    def test_mirror_cartier(self):
        check = check_cartier(self.mirror, {self.sigma: (0, 0), self.lower: (0, 2)})
        self.assertTrue(check.cartier)
        self.assertTrue(check.cartier_on_normalization)

    def test_mirror_cartier_only_on_normalization(self):
        check = check_cartier(self.mirror, {self.sigma: (0, 0), self.lower: (0, 1)})
        self.assertFalse(check.cartier)
        self.assertTrue(check.cartier_on_normalization)
        (condition,) = check.conditions
        self.assertEqual(condition.face, "[1,0]")
        self.assertEqual(condition.orbit_lattice.basis, ((0, 2),))
        self.assertEqual(condition.saturated_lattice.basis, ((0, 1),))

    def test_make_cartier_diagnostic(self):
        with self.assertRaises(NotCartier) as ctx:
            make_cartier(self.mirror, {self.sigma: (0, 0), self.lower: (0, 1)})
        details = ctx.exception.details
        self.assertEqual(details["orbit_lattice"], [[0, 2]])
        self.assertEqual(details["saturated_lattice"], [[0, 1]])
        self.assertTrue(details["cartier_on_normalization"])
        print("+ cartier dichotomy passed")

    def test_missing_value(self):
        with self.assertRaises(UnknownCone):
            make_cartier(self.mirror, {self.sigma: (0, 0)})

    def test_support_value(self):
        divisor = make_cartier(self.mirror, {self.sigma: (0, 0), self.lower: (0, 2)})
        self.assertEqual(support_value(divisor, (1, 1)), 0)
        self.assertEqual(support_value(divisor, (1, -1)), -2)

    def test_scale(self):
        divisor = scale(p1_divisor(0, 1), 3)
        self.assertEqual(divisor.value(MINUS), (3,))
        with self.assertRaises(ValueError):
            scale(divisor, 0)


class TestPolytopeAndSections(unittest.TestCase):
    """P_h and global sections"""

    def test_p1_polytope(self):
        polytope = divisor_polytope(p1_divisor(0, 3))
        self.assertEqual(polytope.vertices, ((0,), (3,)))
        self.assertEqual(polytope.lattice_points(), [(0,), (1,), (2,), (3,)])
        self.assertEqual(polytope.to_dict()["vertices"], [[0], [3]])

    def test_p1_sections(self):
        self.assertEqual(global_sections(p1_divisor(0, 3)), [(0,), (1,), (2,), (3,)])

    def test_cuspidal_sections(self):
        triple = load_example("gkz_cuspidal_cubic")
        divisor = make_cartier(triple, {PLUS: (0,), MINUS: (3,)})
        self.assertEqual(global_sections(divisor), [(0,), (2,), (3,)])

    def test_non_complete(self):
        umbrella = load_example("whitney_umbrella")
        divisor = make_cartier(umbrella, {umbrella.maximal_cones[0]: (0, 0)})
        self.assertIsNone(divisor_polytope(divisor).vertices)
        with self.assertRaises(NonCompleteFan):
            global_sections(divisor)
        with self.assertRaises(NonCompleteFan):
            is_basepoint_free(divisor)


class TestPositivity(unittest.TestCase):
    """Base-point freeness, ampleness and very ampleness"""

    def test_ample_p1(self):
        divisor = p1_divisor(0, 3)
        self.assertTrue(is_basepoint_free(divisor))
        self.assertTrue(is_ample(divisor))
        self.assertTrue(is_very_ample(divisor))

    def test_trivial_divisor_not_ample(self):
        divisor = p1_divisor(0, 0)
        self.assertTrue(is_basepoint_free(divisor))
        self.assertFalse(is_ample(divisor))

    def test_not_basepoint_free(self):
        divisor = p1_divisor(3, 0)
        self.assertFalse(is_basepoint_free(divisor))
        self.assertFalse(is_very_ample(divisor))

    def test_ample_but_not_very_ample(self):
        triple = build_triple(1, [(PLUS, [(2,), (3,)]), (MINUS, [(-1,)])])
        divisor = make_cartier(triple, {PLUS: (0,), MINUS: (1,)})
        self.assertTrue(is_ample(divisor))
        self.assertEqual(global_sections(divisor), [(0,)])
        self.assertFalse(is_very_ample(divisor))


class TestPrincipal(unittest.TestCase):
    """Principal divisors and linear equivalence"""

    def test_half_space_principal(self):
        rx, ry = Cone.from_rays([(1, 0)], 2), Cone.from_rays([(0, 1)], 2)
        triple = build_triple(2, [
            (rx, [(1, 0), (0, 1), (0, -1)]),
            (ry, [(0, 1), (1, 0), (-1, 0)]),
        ])
        divisor = make_cartier(triple, {rx: (0, 5), ry: (3, 0)})
        self.assertEqual(principal_witness(divisor), (0, 0))

    def test_p1_not_principal(self):
        self.assertFalse(is_principal(p1_divisor(0, 3)))
        self.assertTrue(is_principal(p1_divisor(2, 2)))

    def test_equivalence(self):
        self.assertTrue(divisors_equivalent(p1_divisor(0, 3), p1_divisor(1, 4)))
        self.assertFalse(divisors_equivalent(p1_divisor(0, 3), p1_divisor(0, 2)))


class TestGkz(unittest.TestCase):
    """Projective toric varieties from point sets"""

    def test_cuspidal_cubic(self):
        construction = gkz_triple([(0,), (2,), (3,)])
        self.assertEqual(construction.points, ((0,), (2,), (3,)))
        self.assertEqual(global_sections(construction.divisor), [(0,), (2,), (3,)])
        self.assertTrue(is_ample(construction.divisor))
        self.assertTrue(is_very_ample(construction.divisor))
        self.assertEqual(len(construction.triple.maximal_cones), 2)
        print("+ GKZ cuspidal cubic passed")

    def test_sections_beyond_point_set(self):
        construction = gkz_triple([(0,), (1,), (3,), (4,)])
        self.assertEqual(construction.points, ((0,), (1,), (3,), (4,)))
        self.assertEqual(construction.sections, ((0,), (1,), (2,), (3,), (4,)))
        self.assertEqual(tuple(global_sections(construction.divisor)), construction.sections)
        self.assertTrue(is_very_ample(construction.divisor))

    def test_unit_square(self):
        construction = gkz_triple([(0, 0), (1, 0), (0, 1), (1, 1)])
        triple = construction.triple
        self.assertEqual(len(triple.maximal_cones), 4)
        self.assertTrue(all(is_free(triple.chart(s)) for s in triple.maximal_cones))

    def test_reexpressed_in_difference_lattice(self):
        with self.assertLogs('nashtoric.divisors', level='WARNING'):
            construction = gkz_triple([(0, 0), (2, 0), (3, 0)])
        self.assertEqual(construction.points, ((0,), (2,), (3,)))

    def test_degenerate(self):
        with self.assertRaises(DegeneratePolytope):
            gkz_triple([(1, 1), (1, 1)])

    def test_convex_hull(self):
        points = [(0, 0), (2, 0), (0, 2), (1, 1), (1, 0)]
        self.assertEqual(convex_hull_vertices(points), [(0, 0), (0, 2), (2, 0)])


def square_divisor(square, xs, ys):
    """P¹×P¹ 上由射线取值给出的 Cartier 数据；xs, ys 以射线方向 ±1 为键"""
    values = {}
    for sigma in square.maximal_cones:
        s1 = next(r[0] for r in sigma.rays if r[0])
        s2 = next(r[1] for r in sigma.rays if r[1])
        values[sigma] = (xs[s1], ys[s2])
    return make_cartier(square, values)


def sample_divisors(seed):
    """完备扇上的一组测试除子：P¹ 与尖点三次曲线的网格，加上 P¹×P¹ 上的随机数据"""
    rng = random.Random(seed)
    out = [p1_divisor(a, b) for a in range(-2, 3) for b in range(-2, 3)]
    cubic = load_example("gkz_cuspidal_cubic")
    out += [make_cartier(cubic, {PLUS: (a,), MINUS: (b,)}) for a in range(-2, 3) for b in range(-2, 4)]
    square = gkz_triple([(0, 0), (1, 0), (0, 1), (1, 1)]).triple
    for _ in range(12):
        xs = {1: rng.randint(-3, 3), -1: rng.randint(-3, 3)}
        ys = {1: rng.randint(-3, 3), -1: rng.randint(-3, 3)}
        out.append(square_divisor(square, xs, ys))
    for points in ([(0,), (1,), (3,), (4,)], [(0, 0), (2, 0), (0, 1), (1, 1)]):
        out.append(gkz_triple(points).divisor)
    return out


class TestRandomizedDivisors(unittest.TestCase):
    """Scaling, positivity and normalization on grids of Cartier data"""

    def setUp(self):
        self.divisors = sample_divisors(71)

    def test_polytope_scales(self):
        for divisor in self.divisors:
            vertices = divisor_polytope(divisor).vertices
            for factor in (2, 3):
                scaled = divisor_polytope(scale(divisor, factor)).vertices
                expected = sorted(tuple(factor * x for x in v) for v in vertices)
                self.assertEqual(list(scaled), expected, divisor.values)
        print(f"+ {len(self.divisors)} polytope scalings passed")

    def test_positivity_implications(self):
        counts = {"bpf": 0, "ample": 0, "veryample": 0}
        for divisor in self.divisors:
            bpf = is_basepoint_free(divisor)
            ample = is_ample(divisor)
            very = is_very_ample(divisor)
            if very:
                self.assertTrue(ample, divisor.values)
            if ample:
                self.assertTrue(bpf, divisor.values)
            counts["bpf"] += bpf
            counts["ample"] += ample
            counts["veryample"] += very
        self.assertGreater(counts["veryample"], 0)
        self.assertGreater(counts["bpf"], counts["ample"])
        self.assertLess(counts["bpf"], len(self.divisors))

    def test_sections_span_the_polytope(self):
        checked = 0
        for divisor in self.divisors:
            if not is_basepoint_free(divisor):
                continue
            sections = global_sections(divisor)
            # 数据点本身须是整体截面；非正规图卡上可能不成立
            if not set(divisor.values.values()) <= set(sections):
                continue
            vertices = divisor_polytope(divisor).vertices
            self.assertEqual(convex_hull_vertices(sections), sorted(vertices), divisor.values)
            checked += 1
        self.assertGreater(checked, 10)

    def test_cartier_is_monotone_under_normalization(self):
        for name in ("mirror_umbrella", "gkz_cuspidal_cubic", "cusp", "a1_cone"):
            variety = load_example(name)
            normal = normalization(variety)
            cones = list(variety.maximal_cones)
            grid = itertools.product(range(-2, 3), repeat=variety.rank * (len(cones) - 1))
            for flat in grid:
                values = {cones[0]: (0,) * variety.rank}
                for i, sigma in enumerate(cones[1:]):
                    values[sigma] = tuple(flat[i * variety.rank:(i + 1) * variety.rank])
                check = check_cartier(variety, values)
                on_normal = check_cartier(normal, values)
                if check.cartier:
                    self.assertTrue(on_normal.cartier, f"{name} {values}")
                self.assertEqual(check.cartier_on_normalization, on_normal.cartier, f"{name} {values}")


if __name__ == '__main__':
    unittest.main(verbosity=2)
