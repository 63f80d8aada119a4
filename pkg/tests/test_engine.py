"""
Tests for the semigroup engine: closures, forward and inverse orbits,
coverage, escape certificates and single-generator dynamics.
"""

import random
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from GShift.config import AnalysisConfig
from GShift.core.engine import DynamicsKind, OrbitStatus, SemigroupEngine
from GShift.core.escape import EscapeCertificate, check_escape, check_preimage
from GShift.core.index_map import IndexMap, bijectivity, compose
from GShift.core.intervals import Interval
from GShift.core.parser import parse_map, parse_presentation
from GShift.core.words import Presentation, Word
from GShift.errors import BudgetExhaustedError, PresentationError, UnknownGeneratorError
from GShift.main.verify import VERIFY_BITS, verify_evidence


def single(text, name="phi"):
    return Presentation([(name, parse_map(text))])


ABS = single("piece n>=0: n; piece n<0: -n")
NEG = single("piece all: -n")
SQUARE = single("piece all: n^2")
OUTWARD = single("piece n>=1: n+1; piece n==0: 0; piece n<=-1: n-1")
IDENTITY = single("piece all: n", "id")


def engine(presentation, **changes):
    return SemigroupEngine(presentation, AnalysisConfig().replace(**changes))


def random_permutation(rng, lo=-10, hi=10):
    domain = list(range(lo, hi + 1))
    image = domain[:]
    rng.shuffle(image)
    return IndexMap.with_support(dict(zip(domain, image)))


# ---------------------------------------------------------------------------
# Words and presentations
# ---------------------------------------------------------------------------

class TestWords(unittest.TestCase):

    def test_letters_apply_left_to_right(self):
        p = Presentation([("f", parse_map("piece all: n + 1")), ("g", parse_map("piece all: 2*n"))])
        self.assertEqual(Word.of("f", "g").evaluate(p, 3), 8)
        self.assertEqual(Word.of("g", "f").evaluate(p, 3), 7)
        self.assertEqual(Word.of("f", "g").as_map(p)(3), 8)

    def test_printed_form(self):
        self.assertEqual(str(Word()), "id")
        self.assertEqual(str(Word.power("phi", 4)), "phi^4")
        self.assertEqual(str(Word.of("phi", "psi", "psi")), "phi psi^2")
        self.assertEqual(Word.parse("phi psi^2"), Word.of("phi", "psi", "psi"))
        self.assertEqual(Word.parse("id"), Word())

    def test_unknown_letter(self):
        with self.assertRaises(UnknownGeneratorError):
            Word.of("psi").evaluate(SQUARE, 2)

    def test_duplicate_generator_names(self):
        with self.assertRaises(PresentationError):
            Presentation([("phi", IndexMap.identity()), ("phi", IndexMap.identity())])

    def test_presentation_file(self):
        source = parse_presentation("map f\n  piece all: n + 1\nmap g\n  piece all: -n\nparam max_h = 2\n")
        self.assertEqual(source.presentation.names, ["f", "g"])
        self.assertEqual(source.params, {"max_h": "2"})

    def test_presentation_without_maps(self):
        with self.assertRaises(PresentationError):
            parse_presentation("param seed = 3\n")


# ---------------------------------------------------------------------------
# Closure
# ---------------------------------------------------------------------------

class TestClosure(unittest.TestCase):

    def test_absolute_value(self):
        result = engine(ABS).closure()
        self.assertTrue(result.finite)
        self.assertEqual(len(result), 2)
        self.assertIn(IndexMap.identity(), result.maps())

    def test_negation(self):
        result = engine(NEG).closure()
        self.assertTrue(result.finite)
        self.assertEqual([str(word) for word, _ in result.elements], ["id", "phi"])

    def test_square_is_not_finite(self):
        result = engine(SQUARE).closure(budget=10)
        self.assertFalse(result.finite)
        self.assertGreaterEqual(len(result), 2)

    def test_budget_exceeded_keeps_partial_set(self):
        result = engine(OUTWARD).closure(budget=10)
        self.assertFalse(result.finite)
        self.assertEqual(len(result), 10)
        self.assertIn("budget", result.reason)
        for word, index_map in result.elements:
            self.assertEqual(index_map, word.as_map(OUTWARD))

    def test_finite_closure_is_closed(self):
        p = Presentation([("s", parse_map("piece all: -n")), ("r", parse_map("piece all: n; except 1 -> 2; except 2 -> 1"))])
        result = engine(p).closure()
        self.assertTrue(result.finite)
        maps = result.maps()
        self.assertIn(IndexMap.identity(), maps)
        for element in maps:
            for _, generator in p.items():
                self.assertIn(compose(generator, element), maps)
                self.assertIn(compose(element, generator), maps)

    def test_high_degree_on_a_finite_piece_still_closes(self):
        p = single("piece n<=-1: n; piece 0<=n<=5: n^3; piece n>=6: n")
        result = engine(p).closure()
        self.assertTrue(result.finite, result.reason)
        self.assertEqual([str(word) for word, _ in result.elements], ["id", "phi"])


# ---------------------------------------------------------------------------
# Orbits
# ---------------------------------------------------------------------------

class TestOrbit(unittest.TestCase):

    def test_square_orbit_of_two_is_infinite(self):
        result = engine(SQUARE).orbit(2)
        self.assertEqual(result.status, OrbitStatus.INFINITE)
        self.assertTrue(check_escape(result.certificate, SQUARE))
        self.assertTrue({2, 4, 16, 256} <= set(result.points()))

    def test_square_orbit_of_one(self):
        result = engine(SQUARE).orbit(1)
        self.assertTrue(result.is_finite)
        self.assertEqual(result.points(), [1])
        self.assertEqual(result.word_for(1), Word())

    def test_absolute_value_orbit(self):
        result = engine(ABS).orbit(-5)
        self.assertEqual(result.points(), [-5, 5])
        self.assertEqual(result.word_for(5), Word.of("phi"))

    def test_outward_step_escapes_downward(self):
        result = engine(OUTWARD).orbit(-3)
        self.assertTrue(result.is_infinite)
        self.assertEqual(result.certificate.direction, -1)
        self.assertTrue(check_escape(result.certificate, OUTWARD))

    def test_budget_exhausted_is_unknown(self):
        # only phi^2 moves points steadily, and words of length 1 are all that is tried
        p = single("piece n>=0: -n - 1; piece n<0: -n + 1")
        result = engine(p, escape_word_length=1).orbit(0, budget=20)
        self.assertEqual(result.status, OrbitStatus.UNKNOWN)
        self.assertIn("budget", result.reason)
        self.assertGreater(result.frontier_size, 0)
        self.assertTrue(engine(p).orbit(0, budget=20).is_infinite)

    def test_magnitude_guard(self):
        p = single("piece n<0: n^2; piece n>=0: -n^2")
        result = engine(p, escape_word_length=1, max_bits=64).orbit(2)
        self.assertEqual(result.status, OrbitStatus.UNKNOWN)
        self.assertIn("64 bits", result.reason)

    def test_finite_orbits_are_closed_and_words_are_sound(self):
        for presentation in (ABS, NEG, IDENTITY):
            for w in range(-6, 7):
                result = engine(presentation).orbit(w)
                self.assertTrue(result.is_finite)
                points = set(result.points())
                self.assertIn(w, points)
                for t in points:
                    self.assertEqual(result.word_for(t).evaluate(presentation, w), t)
                    for _, generator in presentation.items():
                        self.assertIn(generator(t), points)

    def test_orbit_is_bounded_by_closure_size(self):
        size = len(engine(ABS).closure())
        for w in range(-10, 11):
            self.assertLessEqual(len(engine(ABS).orbit(w).points()), size)

    def test_adding_generators_only_grows_orbits(self):
        bigger = ABS.extended("neg", parse_map("piece all: -n"))
        for w in range(-5, 6):
            small = engine(ABS).orbit(w)
            large = engine(bigger).orbit(w)
            self.assertTrue(set(small.points()) <= set(large.points()))


class TestInverseOrbit(unittest.TestCase):

    def test_negation(self):
        result = engine(NEG).inverse_orbit(3)
        self.assertTrue(result.is_finite)
        self.assertEqual(result.points(), [-3, 3])
        self.assertEqual(result.direction, "inverse")

    def test_identity(self):
        self.assertEqual(engine(IDENTITY).inverse_orbit(9).points(), [9])

    def test_absolute_value_has_no_preimage_of_minus_one(self):
        self.assertEqual(engine(ABS).inverse_orbit(-1).points(), [-1])

    def test_reach_words_map_points_to_the_base(self):
        result = engine(ABS).inverse_orbit(4)
        self.assertEqual(result.points(), [-4, 4])
        for t in result.points():
            self.assertEqual(result.word_for(t).evaluate(ABS, t), 4)

    def test_constant_piece_certifies_infinite(self):
        p = single("piece n<=0: 7; piece n>=1: n + 1")
        result = engine(p).inverse_orbit(8)
        self.assertTrue(result.is_infinite)
        self.assertTrue(check_preimage(result.certificate, p))
        self.assertEqual(result.certificate.value, 7)


class TestOrbitSetAndCoverage(unittest.TestCase):

    def test_orbit_set_examples(self):
        self.assertEqual(engine(ABS).orbit_set([-5]).points(), [-5, 5])
        self.assertEqual(engine(OUTWARD).orbit_set([0]).points(), [0])
        self.assertTrue(engine(OUTWARD).orbit_set([1]).is_infinite)

    def test_outward_step_covers_the_window(self):
        report = engine(OUTWARD).coverage([-1, 0, 1], Interval(-20, 20))
        self.assertTrue(report.covered)
        self.assertEqual(report.missing, [])
        five = report.reach_words[5]
        self.assertEqual((five.origin, five.word), (1, Word.power("phi", 4)))
        for t, how in report.reach_words.items():
            self.assertEqual(how.word.evaluate(OUTWARD, how.origin), t)

    def test_square_leaves_gaps(self):
        report = engine(SQUARE).coverage([1, 2], Interval(-5, 5))
        self.assertFalse(report.covered)
        self.assertIn(3, report.missing)

    def test_window_points_cover_themselves(self):
        window = Interval(-3, 3)
        report = engine(SQUARE).coverage(list(window.points()), window)
        self.assertTrue(report.covered)
        self.assertTrue(all(how.word.is_empty() for how in report.reach_words.values()))


# ---------------------------------------------------------------------------
# Escape certificates
# ---------------------------------------------------------------------------

class TestCheckEscape(unittest.TestCase):
    """
    SCENARIO
    --------
    Hand-written certificates for n^2 and the outward step.

    WHAT IS CORRECT
    ---------------
    n^2 from seed 2 escapes on [2, +inf). From seed 1 it does not, since
    n^2 - n vanishes at 1. The outward step moves every n >= 1 up by one.
    A failed check names the condition that failed.
    """

    def test_square_from_two(self):
        cert = EscapeCertificate(2, Word(), 2, Word.of("phi"), 2)
        self.assertTrue(check_escape(cert, SQUARE))

    def test_square_from_one_fails(self):
        result = check_escape(EscapeCertificate(1, Word(), 1, Word.of("phi"), 1), SQUARE)
        self.assertFalse(result)
        self.assertIn("positive", result.failed)

    def test_outward_step_from_one(self):
        self.assertTrue(check_escape(EscapeCertificate(1, Word(), 1, Word.of("phi"), 1), OUTWARD))

    def test_wrong_seed_word(self):
        result = check_escape(EscapeCertificate(3, Word.of("phi"), 3, Word.of("phi"), 3), SQUARE)
        self.assertFalse(result)
        self.assertIn("seed word", result.failed)

    def test_seed_outside_ray(self):
        self.assertFalse(check_escape(EscapeCertificate(2, Word(), 2, Word.of("phi"), 5), SQUARE))

    def test_iterates_are_distinct(self):
        cert = engine(SQUARE).orbit(3).certificate
        points = cert.iterates(SQUARE, 8)
        self.assertEqual(len(set(points)), 8)

    def test_square_from_two_checks_twenty_iterates(self):
        cert = engine(SQUARE).orbit(2).certificate
        self.assertEqual((cert.seed, cert.word), (2, Word.of("phi")))
        points = cert.iterates(SQUARE, 20, VERIFY_BITS)
        self.assertEqual(len(points), 20)
        self.assertEqual(points[-1], 2 ** (2 ** 19))
        self.assertEqual(verify_evidence(cert, SQUARE), [])


# ---------------------------------------------------------------------------
# Single-generator dynamics
# ---------------------------------------------------------------------------

class TestPointDynamics(unittest.TestCase):

    def test_periodic(self):
        p = single("piece all: n; except 1 -> 2; except 2 -> 3; except 3 -> 1")
        dynamics = engine(p).point_dynamics("phi", 2)
        self.assertEqual((dynamics.kind, dynamics.period), (DynamicsKind.PERIODIC, 3))

    def test_quasi_periodic(self):
        dynamics = engine(ABS).point_dynamics("phi", -4)
        self.assertEqual(dynamics.kind, DynamicsKind.QUASI_PERIODIC)
        self.assertEqual((dynamics.preperiod, dynamics.period), (1, 1))

    def test_escaping(self):
        dynamics = engine(SQUARE).point_dynamics("phi", 2)
        self.assertEqual(dynamics.kind, DynamicsKind.ESCAPING)
        self.assertTrue(check_escape(dynamics.certificate, SQUARE))

    def test_periodic_inverse(self):
        p = single("piece all: n; except 1 -> 2; except 2 -> 3; except 3 -> 1")
        point, word = engine(p).periodic_inverse("phi", 1)
        self.assertEqual(point, 3)
        self.assertEqual(word, Word.power("phi", 2))

    def test_periodic_inverse_of_escaping_point(self):
        with self.assertRaises(BudgetExhaustedError):
            engine(SQUARE).periodic_inverse("phi", 2)


class TestPermutations(unittest.TestCase):
    """
    SCENARIO
    --------
    Presentations of finite-support permutations of Z.

    WHAT IS CORRECT
    ---------------
    Every generator is bijective, orbits are finite and each forward orbit
    equals the inverse orbit of the same point.
    """

    @given(st.integers(0, 10_000), st.integers(1, 2))
    @settings(max_examples=40, deadline=None)
    def test_forward_and_inverse_orbits_agree(self, seed, count):
        rng = random.Random(seed)
        p = Presentation([(f"p{i}", random_permutation(rng)) for i in range(count)])
        for _, generator in p.items():
            self.assertTrue(bijectivity(generator).is_yes)
        e = engine(p)
        for w in range(-12, 13):
            forward = e.orbit(w)
            backward = e.inverse_orbit(w)
            self.assertTrue(forward.is_finite and backward.is_finite)
            self.assertEqual(forward.points(), backward.points())


if __name__ == "__main__":
    unittest.main()
