#!/usr/bin/env python3
"""
Monomial Blowup Tests
Ideals, Newton polyhedra, order functions and sheaf blowups
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
    from src.blowup import (
        blowup_affine,
        blowup_sheaf,
        check_sheaf_compatibility,
        extend_ideal,
        linearity_regions,
        make_ideal,
        newton_polyhedron,
        order_function,
        same_ideal,
    )
    from src.cones import Cone, Fan
    from src.corpus import load_example
    from src.errors import IdealError, NotInCone, NotPointed, SheafIncompatible
    from src.lattice_core import dot
    from src.semigroups import make_semigroup, minimal_generators, same_members
    from src.variety import same_triple
except ImportError as e:
    print(f"Import error: {e}")
    print("Some dependencies may be missing. Install with: pip install -r requirements.txt")
    sys.exit(1)


UMBRELLA = [(1, 0), (0, 2), (1, 1)]
A1 = [(1, 0), (1, 1), (1, 2)]
CUSP_TIMES_LINE = [(1, 0), (-1, 0), (0, 2), (0, 3)]


class TestMonomialIdeal(unittest.TestCase):
    """Ideal construction and membership"""

    def setUp(self):
        self.umbrella = make_semigroup(2, UMBRELLA)

    def test_membership(self):
        ideal = make_ideal(self.umbrella, [(1, 0)])
        self.assertTrue(ideal.contains((1, 2)))
        self.assertTrue(ideal.contains((2, 1)))
        self.assertFalse(ideal.contains((0, 2)))

    def test_exponents_deduplicated(self):
        ideal = make_ideal(self.umbrella, [(1, 0), (1, 0), (0, 2)])
        self.assertEqual(ideal.exponents, ((1, 0), (0, 2)))

    def test_invalid_ideals(self):
        with self.assertRaises(IdealError):
            make_ideal(self.umbrella, [])
        with self.assertRaises(IdealError):
            make_ideal(self.umbrella, [(0, 1)])
        with self.assertRaises(IdealError):
            make_ideal(self.umbrella, [(1, 0, 0)])

    def test_extension_to_localization(self):
        local = make_semigroup(2, UMBRELLA + [(0, -2)])
        extended = extend_ideal(make_ideal(self.umbrella, UMBRELLA), local)
        self.assertTrue(extended.contains((0, 0)))
        self.assertTrue(same_ideal(extended, make_ideal(local, [(0, 0)])))


class TestNewtonPolyhedron(unittest.TestCase):
    """Linearity regions and order functions"""

    def test_a1_log_jacobian_newton_polyhedron(self):
        gamma = make_semigroup(2, A1)
        polyhedron = newton_polyhedron(gamma, make_ideal(gamma, [(2, 1), (2, 2), (2, 3)]))
        self.assertEqual(polyhedron.vertices, ((2, 1), (2, 3)))
        self.assertEqual(order_function(polyhedron, (0, 1)), 1)
        self.assertEqual(order_function(polyhedron, (2, -1)), 1)
        self.assertEqual(order_function(polyhedron, (1, 0)), 2)
        print("+ A1 newton polyhedron passed")

    def test_order_function_outside_cone(self):
        gamma = make_semigroup(2, A1)
        polyhedron = newton_polyhedron(gamma, make_ideal(gamma, [(1, 0)]))
        with self.assertRaises(NotInCone):
            order_function(polyhedron, (-1, 0))

    def test_regions_of_maximal_ideal(self):
        gamma = make_semigroup(2, UMBRELLA)
        regions = linearity_regions(gamma, UMBRELLA)
        self.assertEqual(
            [(cone.rays, vertex) for cone, vertex in regions],
            [(((0, 1), (2, 1)), (1, 0)), (((1, 0), (2, 1)), (0, 2))],
        )

    def test_principal_ideal_has_one_region(self):
        gamma = make_semigroup(2, UMBRELLA)
        regions = linearity_regions(gamma, [(1, 1)])
        self.assertEqual(len(regions), 1)
        self.assertEqual(regions[0][0], gamma.dual)

    def test_requires_pointed(self):
        gamma = make_semigroup(2, [(1, 0), (-1, 0), (0, 1)])
        with self.assertRaises(NotPointed):
            newton_polyhedron(gamma, make_ideal(gamma, [(0, 1)]))


class TestAffineBlowup(unittest.TestCase):
    """Blowups of single charts"""

    def test_plane_blowup(self):
        plane = make_semigroup(2, [(1, 0), (0, 1)])
        result = blowup_affine(plane, make_ideal(plane, [(1, 0), (0, 1)]))
        left = Cone.from_rays([(0, 1), (1, 1)])
        right = Cone.from_rays([(1, 0), (1, 1)])
        self.assertEqual(result.maximal_cones, (left, right))
        self.assertTrue(same_members(result.chart(left), make_semigroup(2, [(-1, 1), (1, 0)])))
        self.assertTrue(same_members(result.chart(right), make_semigroup(2, [(0, 1), (1, -1)])))
        print("+ plane blowup passed")

    def test_unit_ideal_is_identity(self):
        gamma = make_semigroup(2, UMBRELLA)
        result = blowup_affine(gamma, make_ideal(gamma, [(0, 0)]))
        self.assertEqual(result.maximal_cones, (gamma.dual,))
        self.assertTrue(same_members(result.chart(gamma.dual), gamma))

    def test_umbrella_maximal_ideal(self):
        gamma = make_semigroup(2, UMBRELLA)
        result = blowup_affine(gamma, make_ideal(gamma, UMBRELLA))
        self.assertEqual(
            [s.rays for s in result.maximal_cones],
            [((0, 1), (2, 1)), ((1, 0), (2, 1))],
        )
        right = result.maximal_cones[1]
        self.assertEqual(minimal_generators(result.chart(right)), sorted(result.chart(right).generators))

    def test_non_pointed_chart(self):
        gamma = make_semigroup(2, [(1, 0), (-1, 0), (0, 1)])
        result = blowup_affine(gamma, make_ideal(gamma, [(0, 1), (1, 1)]))
        self.assertEqual(len(result.maximal_cones), 1)

    def test_non_pointed_chart_generators_reduced(self):
        gamma = make_semigroup(2, CUSP_TIMES_LINE)
        ideal = make_ideal(gamma, [(-1, 2), (-1, 3), (1, 2), (1, 3)])
        result = blowup_affine(gamma, ideal)
        (sigma,) = result.maximal_cones
        chart = result.chart(sigma)
        self.assertEqual(len(chart.generators), 3)
        self.assertIn((1, 0), chart.generators)
        self.assertIn((-1, 0), chart.generators)
        self.assertTrue(same_members(chart, make_semigroup(2, [(1, 0), (-1, 0), (0, 1)])))


class TestSheafBlowup(unittest.TestCase):
    """Compatibility and blowup of ideal sheaves"""

    def setUp(self):
        self.mirror = load_example("mirror_umbrella")
        self.sigma = self.mirror.find_cone("sigma")
        self.lower = self.mirror.find_cone("mirror")

    def test_maximal_ideals_are_compatible(self):
        ideals = {
            s: make_ideal(self.mirror.chart(s), self.mirror.chart(s).generators)
            for s in self.mirror.maximal_cones
        }
        check_sheaf_compatibility(self.mirror, ideals)
        result = blowup_sheaf(self.mirror, ideals)
        self.assertEqual(len(result.maximal_cones), 4)

    def test_incompatible_ideals(self):
        ideals = {
            self.sigma: make_ideal(self.mirror.chart(self.sigma), [(1, 0), (1, 1)]),
            self.lower: make_ideal(self.mirror.chart(self.lower), [(0, 0)]),
        }
        with self.assertRaises(SheafIncompatible) as ctx:
            check_sheaf_compatibility(self.mirror, ideals)
        self.assertEqual(ctx.exception.details["face"], "[1,0]")

    def test_missing_ideal(self):
        ideals = {self.sigma: make_ideal(self.mirror.chart(self.sigma), [(1, 0)])}
        with self.assertRaises(IdealError):
            check_sheaf_compatibility(self.mirror, ideals)

    def test_unit_sheaf_is_identity(self):
        ideals = {s: make_ideal(self.mirror.chart(s), [(0, 0)]) for s in self.mirror.maximal_cones}
        self.assertTrue(same_triple(blowup_sheaf(self.mirror, ideals), self.mirror))


def random_ideals(rng, count):
    """(Γ, 指数) 对：指数取自坐标在 0..3 之间的非零成员"""
    semigroups = [make_semigroup(2, gens) for gens in (UMBRELLA, A1, [(1, 0), (0, 1)], [(2, 0), (3, 0), (0, 1), (1, 1)])]
    out = []
    for _ in range(count):
        gamma = rng.choice(semigroups)
        members = [p for p in itertools.product(range(4), repeat=2) if any(p) and gamma.contains(p)]
        out.append((gamma, rng.sample(members, rng.randint(1, 4))))
    return out


class TestRandomizedOrderFunctions(unittest.TestCase):
    """Order functions and their linearity regions on seeded random ideals"""

    def setUp(self):
        self.cases = random_ideals(random.Random(51), 10)

    def lattice_points(self, cone, radius, strict=False):
        return [
            v for v in itertools.product(range(-radius, radius + 1), repeat=cone.ambient_rank)
            if cone.contains(v, strict=strict)
        ]

    def test_homogeneous_and_superadditive(self):
        for gamma, exps in self.cases:
            polyhedron = newton_polyhedron(gamma, make_ideal(gamma, exps))
            points = self.lattice_points(gamma.dual, 4)
            for nu in points:
                for k in (2, 3):
                    scaled = tuple(k * x for x in nu)
                    self.assertEqual(order_function(polyhedron, scaled), k * order_function(polyhedron, nu))
                for mu in points:
                    total = tuple(a + b for a, b in zip(nu, mu))
                    self.assertGreaterEqual(
                        order_function(polyhedron, total),
                        order_function(polyhedron, nu) + order_function(polyhedron, mu),
                        f"{exps} {nu} {mu}",
                    )
        print("+ order function homogeneity passed")

    def test_regions_subdivide_the_cone(self):
        for gamma, exps in self.cases:
            regions = linearity_regions(gamma, exps)
            Fan.from_maximal([region for region, _ in regions], gamma.rank)
            polyhedron = newton_polyhedron(gamma, make_ideal(gamma, exps))
            for nu in self.lattice_points(gamma.dual, 6):
                holding = [(region, vertex) for region, vertex in regions if region.contains(nu)]
                self.assertTrue(holding, f"{exps} {nu}")
                inside = [region for region, _ in holding if region.contains(nu, strict=True)]
                self.assertLessEqual(len(inside), 1, f"{exps} {nu}")
                for _, vertex in holding:
                    self.assertEqual(order_function(polyhedron, nu), dot(nu, vertex), f"{exps} {nu}")

    def test_vertices_match_full_dimensional_regions(self):
        for gamma, exps in self.cases:
            polyhedron = newton_polyhedron(gamma, make_ideal(gamma, exps))
            unique_minimizers = set()
            for nu in self.lattice_points(gamma.dual, 8, strict=True):
                values = [dot(nu, e) for e in exps]
                best = min(values)
                if values.count(best) == 1:
                    unique_minimizers.add(tuple(exps[values.index(best)]))
            self.assertEqual(set(polyhedron.vertices), unique_minimizers, exps)
            self.assertEqual(len(polyhedron.pieces), len(polyhedron.vertices))
            self.assertEqual(sorted(v for _, v in polyhedron.pieces), list(polyhedron.vertices))


if __name__ == '__main__':
    unittest.main(verbosity=2)
