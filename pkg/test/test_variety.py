#!/usr/bin/env python3
"""
Toric Triple Tests
Validation, orbits, closures, normalization, fan maps and lifts
"""

import sys
import unittest
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

try:
    from src.cones import Cone
    from src.corpus import example_names, load_example
    from src.errors import (
        DimensionMismatch,
        FanAxiomViolation,
        GluingViolation,
        NoCompatibleCone,
        SemigroupConeMismatch,
        UnknownCone,
    )
    from src.lattice_core import LinearMap
    from src.semigroups import make_semigroup, same_members
    from src.variety import (
        build_triple,
        check_fan_map,
        compose_fan_maps,
        lifts_to_normalization,
        limit_exists,
        normalization,
        orbit_closure,
        orbits,
        same_triple,
        smooth_locus,
        toric_ideal_lattice,
    )
except ImportError as e:
    print(f"Import error: {e}")
    print("Some dependencies may be missing. Install with: pip install -r requirements.txt")
    sys.exit(1)


QUADRANT = Cone.from_rays([(1, 0), (0, 1)])
LOWER = Cone.from_rays([(1, 0), (0, -1)])
RAY_X = Cone.from_rays([(1, 0)], 2)
RAY_Y = Cone.from_rays([(0, 1)], 2)
UMBRELLA = [(1, 0), (0, 2), (1, 1)]


def umbrella():
    return build_triple(2, [(QUADRANT, UMBRELLA)], {QUADRANT: "sigma"})


def affine_line():
    return build_triple(1, [(Cone.from_rays([(1,)]), [(1,)])])


class TestBuildTriple(unittest.TestCase):
    """Validation of triples"""

    def test_corpus_examples_validate(self):
        for name in example_names():
            variety = load_example(name)
            self.assertGreater(len(variety.maximal_cones), 0, name)
        print("+ corpus examples validate passed")

    def test_localizations_cover_all_cones(self):
        variety = umbrella()
        self.assertEqual(set(variety.localizations), set(variety.fan.cones))
        self.assertIs(variety.semigroup_at(QUADRANT), variety.chart(QUADRANT))

    def test_semigroup_cone_mismatch(self):
        with self.assertRaises(SemigroupConeMismatch):
            build_triple(2, [(QUADRANT, [(1, 0), (1, 1), (1, 2)])])

    def test_gluing_violation(self):
        with self.assertRaises(GluingViolation) as ctx:
            build_triple(2, [(QUADRANT, UMBRELLA), (LOWER, [(1, 0), (0, -1)])])
        self.assertEqual(ctx.exception.details["face"], RAY_X.label())

    def test_mirror_glues(self):
        variety = load_example("mirror_umbrella")
        self.assertEqual(len(variety.maximal_cones), 2)
        self.assertEqual(variety.find_cone("mirror"), LOWER)

    def test_chart_on_face_rejected(self):
        with self.assertRaises(FanAxiomViolation):
            build_triple(2, [(QUADRANT, UMBRELLA), (RAY_X, [(1, 0), (0, 1), (0, -1)])])

    def test_duplicate_chart_rejected(self):
        with self.assertRaises(FanAxiomViolation):
            build_triple(2, [(QUADRANT, UMBRELLA), (QUADRANT, [(1, 0), (0, 1)])])

    def test_unknown_cone(self):
        variety = umbrella()
        with self.assertRaises(UnknownCone):
            variety.find_cone("nowhere")
        with self.assertRaises(UnknownCone):
            variety.chart(RAY_X)
        self.assertEqual(variety.find_cone("[1,0]"), RAY_X)
        self.assertEqual(variety.cone_label(RAY_X), "[1,0]")
        self.assertEqual(variety.cone_label(QUADRANT), "sigma")

    def test_same_triple(self):
        reordered = build_triple(2, [(QUADRANT, [(1, 1), (0, 2), (1, 0), (2, 2)])])
        self.assertTrue(same_triple(umbrella(), reordered))
        self.assertFalse(same_triple(umbrella(), normalization(umbrella())))


class TestOrbits(unittest.TestCase):
    """Orbit data and smooth locus"""

    def test_umbrella_orbits(self):
        result = orbits(umbrella())
        self.assertEqual([o.cone for o in result], [Cone.zero(2), RAY_Y, RAY_X, QUADRANT])
        self.assertEqual([o.dimension for o in result], [2, 1, 1, 0])
        self.assertEqual([o.index for o in result], [1, 1, 2, 1])
        self.assertEqual(result[2].orbit_lattice.basis, ((0, 2),))
        print("+ umbrella orbits passed")

    def test_smooth_locus(self):
        self.assertEqual(smooth_locus(umbrella()), [Cone.zero(2), RAY_Y])
        plane = load_example("smooth_plane")
        self.assertEqual(smooth_locus(plane), list(plane.fan.cones))

    def test_cusp_smooth_locus(self):
        cusp = load_example("cusp")
        self.assertEqual(smooth_locus(cusp), [Cone.zero(1)])

    def test_orbit_closure_of_ray(self):
        closure = orbit_closure(umbrella(), RAY_X)
        self.assertEqual(closure.rank, 1)
        (sigma,) = closure.maximal_cones
        self.assertEqual(closure.chart(sigma).generators, ((1,),))

    def test_orbit_closure_of_mirror_is_line(self):
        variety = load_example("mirror_umbrella")
        closure = orbit_closure(variety, RAY_X)
        self.assertEqual(closure.rank, 1)
        self.assertEqual(len(closure.maximal_cones), 2)
        self.assertTrue(closure.fan.is_complete())
        self.assertEqual({closure.cone_label(s) for s in closure.maximal_cones}, {"sigma", "mirror"})

    def test_orbit_closure_of_zero_cone(self):
        variety = umbrella()
        closure = orbit_closure(variety, Cone.zero(2))
        self.assertTrue(same_triple(closure, variety))


class TestNormalizationAndLimits(unittest.TestCase):
    """Normalization, one-parameter limits and toric ideals"""

    def test_normalization(self):
        normal = normalization(umbrella())
        self.assertEqual(normal.chart(QUADRANT).generators, ((0, 1), (1, 0)))
        self.assertEqual(normal.fan.cones, umbrella().fan.cones)

    def test_limits(self):
        variety = umbrella()
        self.assertTrue(limit_exists(variety, (1, 2)))
        self.assertTrue(limit_exists(variety, (0, 0)))
        self.assertFalse(limit_exists(variety, (-1, 0)))
        with self.assertRaises(DimensionMismatch):
            limit_exists(variety, (1, 2, 3))

    def test_toric_ideal_lattice(self):
        ideal = toric_ideal_lattice(make_semigroup(2, UMBRELLA))
        self.assertEqual(ideal.lattice.basis, ((2, 1, -2),))
        self.assertEqual(ideal.binomials, (((2, 1, 0), (0, 0, 2)),))
        self.assertFalse(ideal.to_dict()["generates_ideal"])
        cusp = toric_ideal_lattice(make_semigroup(1, [(2,), (3,)]))
        self.assertEqual(cusp.binomials, (((3, 0), (0, 2)),))


class TestFanMaps(unittest.TestCase):
    """Fan maps with semigroups and lifts"""

    def test_line_into_umbrella(self):
        fan_map = check_fan_map(LinearMap.from_rows([[0], [1]]), affine_line(), umbrella())
        self.assertEqual(list(fan_map.assignment.values()), [RAY_Y])

    def test_incompatible_map(self):
        with self.assertRaises(NoCompatibleCone):
            check_fan_map(LinearMap.from_rows([[0], [-1]]), affine_line(), umbrella())

    def test_rank_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            check_fan_map(LinearMap.identity(2), affine_line(), umbrella())

    def test_compose(self):
        line = affine_line()
        identity = check_fan_map(LinearMap.identity(1), line, line)
        into = check_fan_map(LinearMap.from_rows([[0], [1]]), line, umbrella())
        composed = compose_fan_maps(identity, into)
        self.assertEqual(composed.assignment, into.assignment)
        self.assertEqual(composed.linear_map.matrix, ((0,), (1,)))

    def test_lift_to_normalization(self):
        variety = umbrella()
        no = lifts_to_normalization(variety, RAY_X, LinearMap.from_rows([[1]]))
        self.assertFalse(no.lifts)
        self.assertIsNone(no.extension)
        self.assertEqual(no.index, 2)
        yes = lifts_to_normalization(variety, RAY_X, LinearMap.from_rows([[2]]))
        self.assertTrue(yes.lifts)
        self.assertEqual(yes.extension.matrix, ((1,),))

    def test_lift_on_index_one_face(self):
        result = lifts_to_normalization(umbrella(), RAY_Y, LinearMap.from_rows([[5]]))
        self.assertTrue(result.lifts)
        self.assertEqual(result.extension.matrix, ((5,),))

    def test_lift_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            lifts_to_normalization(umbrella(), RAY_X, LinearMap.from_rows([[1, 0]]))


class TestCorpusNormalization(unittest.TestCase):
    """Normalization over every built-in example"""

    def test_idempotent(self):
        for name in example_names():
            normal = normalization(load_example(name))
            self.assertTrue(same_triple(normalization(normal), normal), name)

    def test_smooth_locus_grows(self):
        for name in example_names():
            variety = load_example(name)
            normal = normalization(variety)
            self.assertLessEqual(set(smooth_locus(variety)), set(smooth_locus(normal)), name)
            self.assertEqual(normal.fan, variety.fan)
        print("+ corpus normalization passed")


if __name__ == '__main__':
    unittest.main(verbosity=2)
