"""
Acceptance suite: the regression corpus, the laws the shift machinery must
obey on random inputs, the finite-oracle sweeps and the soundness of every
certificate and witness the classifier hands out.

Every random case is drawn from a seeded random.Random, so failures
reproduce exactly.
"""

import os
import random
import unittest
from itertools import product

from GShift.config import AnalysisConfig
from GShift.core.classifier import Classifier
from GShift.core.engine import SemigroupEngine
from GShift.core.escape import check_escape
from GShift.core.index_map import IndexMap, Piece, compose
from GShift.core.intervals import Interval
from GShift.core.parser import parse_map
from GShift.core.patterns import Pattern
from GShift.core.polynomial import IntPoly
from GShift.core.words import Presentation, Word
from GShift.main.api import load_presentation
from GShift.main.verify import verify_evidence
from GShift.oracle.crosscheck import standard_sweeps
from GShift.oracle.finite import apply_shift, compose_tables

CORPUS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")

SMALL = AnalysisConfig(budget_closure=30, budget_orbit=200, probes=Interval(-3, 3),
                       window=Interval(-6, 6), max_h=2, search_window=16)


def random_affine_map(rng):
    left = IntPoly.linear(rng.randint(-2, 2), rng.randint(-3, 3))
    right = IntPoly.linear(rng.randint(-2, 2), rng.randint(-3, 3))
    return IndexMap([Piece(Interval(None, -1), left), Piece(Interval(0, None), right)]).normalize()


def random_permutation(rng, radius=10):
    domain = list(range(-radius, radius + 1))
    image = domain[:]
    rng.shuffle(image)
    return IndexMap.with_support(dict(zip(domain, image)))


def random_index_map(rng):
    kind = rng.randrange(4)
    if kind == 0:
        return random_affine_map(rng)
    if kind == 1:
        return IndexMap.from_poly(IntPoly((rng.randint(-3, 3), rng.randint(-2, 2), rng.choice([-1, 1]))))
    if kind == 2:
        return IndexMap.with_support({a: rng.randint(-8, 8) for a in range(-5, 6)})
    return IndexMap.from_poly(IntPoly.linear(rng.choice([-1, 1]), rng.randint(-4, 4)))


def random_pattern(rng, radius, k=2):
    return Pattern({a: rng.randrange(k) for a in range(-radius, radius + 1)}, rng.randrange(k), k)


def escape_presentation(rng):
    up, down = rng.randint(1, 3), rng.randint(1, 3)
    return Presentation([("phi", parse_map(f"piece n>=0: n + {up}; piece n<0: n - {down}"))])


def words_up_to(names, length):
    for size in range(length + 1):
        for letters in product(names, repeat=size):
            yield Word(letters)


# ---------------------------------------------------------------------------
# Regression corpus
# ---------------------------------------------------------------------------

class TestCorpus(unittest.TestCase):
    """
    SCENARIO
    --------
    The four reference systems |n|, -n, n^2 and the outward step, read
    from their corpus files with the default configuration.

    WHAT IS CORRECT
    ---------------
    Exact verdicts and diagram positions, no Unknown anywhere.
    """

    expected = {
        "absolute_value": ("equicontinuous, not distal", {"equicontinuous": "yes", "distal": "no"}),
        "negation": ("distal", {"distal": "yes"}),
        "square": ("sensitive, not expansive", {"sensitive": "yes", "expansive": "no"}),
        "outward_step": ("expansive", {"expansive": "yes"}),
    }

    def test_reference_systems(self):
        for name, (diagram, outcomes) in self.expected.items():
            with self.subTest(name=name):
                source = load_presentation(os.path.join(CORPUS, f"{name}.gsh"))
                result = Classifier(source.presentation).classify()
                self.assertEqual(result.diagram, diagram)
                self.assertTrue(result.is_decisive)
                for prop, outcome in outcomes.items():
                    self.assertEqual(result.verdicts[prop].outcome.value, outcome)


# ---------------------------------------------------------------------------
# Shift laws
# ---------------------------------------------------------------------------

class TestAntiHomomorphism(unittest.TestCase):
    """Shifting by phi then eta equals shifting once by phi o eta."""

    def test_patterns_on_z(self):
        rng = random.Random(2024)
        for _ in range(1000):
            phi, eta = random_index_map(rng), random_index_map(rng)
            x = random_pattern(rng, 30, rng.choice([2, 3]))
            twice = x.shift(phi).shift(eta)
            once = x.shift(compose(phi, eta))
            for alpha in range(-8, 9):
                self.assertEqual(twice.value_at(alpha), once.value_at(alpha))

    def test_finite_tables(self):
        rng = random.Random(7)
        for _ in range(1000):
            m = rng.randint(1, 6)
            phi = [rng.randrange(m) for _ in range(m)]
            eta = [rng.randrange(m) for _ in range(m)]
            cfg = [rng.randrange(3) for _ in range(m)]
            self.assertEqual(apply_shift(eta, apply_shift(phi, cfg)).tolist(),
                             apply_shift(compose_tables(phi, eta), cfg).tolist())


# ---------------------------------------------------------------------------
# Finite oracle
# ---------------------------------------------------------------------------

class TestOracleSweeps(unittest.TestCase):
    """
    SCENARIO
    --------
    Every instance with m <= 3, k = 2 and at most two generators, then
    1000 seeded random instances with m = 4, each against every subset H.

    WHAT IS CORRECT
    ---------------
    The definition of expansivity with modulus alpha_H agrees with
    T.H == all coordinates, the entourage modulus holds, groups are
    exactly the bijective presentations, and sensitivity never holds.
    """

    def test_standard_sweeps(self):
        for report in standard_sweeps(seed=0, random_count=1000, max_m=3, random_m=4):
            with self.subTest(sweep=report.name):
                self.assertTrue(report.ok, report.disagreements[:3])
                self.assertGreater(report.instances, 0)


class TestModulusOnZ(unittest.TestCase):

    def test_agreement_on_H_survives_every_short_word(self):
        rng = random.Random(11)
        for name in ("absolute_value", "negation"):
            presentation = load_presentation(os.path.join(CORPUS, f"{name}.gsh")).presentation
            classifier = Classifier(presentation)
            words = list(words_up_to(presentation.names, 6))
            for _ in range(50):
                H0 = rng.sample(range(-10, 11), rng.randint(1, 4))
                H = classifier.equicontinuity_modulus(H0).evidence.H
                for _ in range(100):
                    x = random_pattern(rng, 12)
                    y = Pattern({a: (x.value_at(a) if a in H else rng.randrange(2)) for a in range(-12, 13)},
                                x.default)
                    for word in words:
                        sx = x.shift_by_word(word, presentation)
                        sy = y.shift_by_word(word, presentation)
                        self.assertTrue(sx.agrees_on(sy, H0), (name, H0, str(word)))


# ---------------------------------------------------------------------------
# Finite orbits of permutations
# ---------------------------------------------------------------------------

class TestPermutationOrbits(unittest.TestCase):

    def test_forward_equals_inverse(self):
        rng = random.Random(5)
        for _ in range(200):
            presentation = Presentation([(f"p{i}", random_permutation(rng)) for i in range(rng.randint(1, 2))])
            engine = SemigroupEngine(presentation)
            for w in range(-12, 13):
                forward, backward = engine.orbit(w), engine.inverse_orbit(w)
                self.assertTrue(forward.is_finite and backward.is_finite)
                self.assertEqual(forward.points(), backward.points())

    def test_periodic_inverse(self):
        rng = random.Random(6)
        for _ in range(200):
            presentation = Presentation([("p", random_permutation(rng))])
            w = rng.randint(-10, 10)
            point, word = SemigroupEngine(presentation).periodic_inverse("p", w)
            self.assertEqual(presentation["p"](point), w)
            self.assertEqual(word.evaluate(presentation, w), point)


# ---------------------------------------------------------------------------
# Witnesses and certificates
# ---------------------------------------------------------------------------

class TestWitnessValidity(unittest.TestCase):

    def test_sensitivity_witnesses(self):
        rng = random.Random(17)
        square = load_presentation(os.path.join(CORPUS, "square.gsh")).presentation
        for i in range(100):
            if i % 2:
                presentation, v = square, rng.randint(2, 40)
                orbit = [v, v ** 2, v ** 4]
            else:
                presentation, v = escape_presentation(rng), rng.randint(-20, 20)
                orbit = [Word.power("phi", j).evaluate(presentation, v) for j in range(4)]
            protected = rng.sample(orbit, rng.randint(0, 3)) + [rng.randint(-20, 20)]
            witness = Classifier(presentation, SMALL).sensitivity_witness(v, random_pattern(rng, 5), protected)
            self.assertEqual(verify_evidence(witness, presentation), [])
            self.assertNotIn(witness.flipped_coord, protected)

    def test_expansivity_witnesses(self):
        rng = random.Random(19)
        outward = load_presentation(os.path.join(CORPUS, "outward_step.gsh")).presentation
        classifier = Classifier(outward, SMALL)
        for _ in range(100):
            x = random_pattern(rng, 20, rng.choice([2, 3]))
            w = rng.randint(-30, 30)
            witness = classifier.expansivity_witness((-1, 0, 1), x, x.flip(w))
            self.assertEqual(witness.w, w)
            self.assertEqual(verify_evidence(witness, outward), [])


class TestEscapeSoundness(unittest.TestCase):
    """Every certified infinite orbit passes check_escape and its iterates never repeat."""

    def test_certificates(self):
        rng = random.Random(23)
        corpus = {name: load_presentation(os.path.join(CORPUS, f"{name}.gsh")).presentation
                  for name in ("square", "outward_step")}
        cases = [(corpus["square"], w) for w in list(range(-10, -1)) + list(range(2, 11))]
        cases += [(corpus["outward_step"], w) for w in range(-10, 11) if w]
        cases += [(escape_presentation(rng), rng.randint(-20, 20)) for _ in range(50)]
        for presentation, w in cases:
            result = SemigroupEngine(presentation).orbit(w)
            self.assertTrue(result.is_infinite, (presentation, w))
            cert = result.certificate
            self.assertTrue(check_escape(cert, presentation))
            self.assertEqual(verify_evidence(cert, presentation), [])
            points = cert.iterates(presentation, 20)
            self.assertEqual(len(set(points)), 20)


# ---------------------------------------------------------------------------
# Coherence of the verdicts
# ---------------------------------------------------------------------------

class TestCoherence(unittest.TestCase):
    """
    SCENARIO
    --------
    The corpus plus 200 random presentations of one or two piecewise
    affine, quadratic or finite-support maps, classified on small budgets.

    WHAT IS CORRECT
    ---------------
    Sensitive is the negation of equicontinuous, distal Yes forces
    equicontinuous Yes, expansive Yes forces sensitive Yes, and every
    decisive verdict's evidence re-verifies.
    """

    def presentations(self):
        for name in ("absolute_value", "negation", "square", "outward_step", "identity"):
            yield load_presentation(os.path.join(CORPUS, f"{name}.gsh")).presentation
        rng = random.Random(29)
        for _ in range(200):
            yield Presentation([(f"g{i}", random_index_map(rng)) for i in range(rng.randint(1, 2))])

    def test_verdicts_cohere(self):
        for presentation in self.presentations():
            result = Classifier(presentation, SMALL).classify()
            v = result.verdicts
            self.assertEqual(v["sensitive"].outcome, v["equicontinuous"].outcome.negated())
            if v["distal"].is_yes:
                self.assertTrue(v["equicontinuous"].is_yes, presentation)
            if v["expansive"].is_yes:
                self.assertTrue(v["sensitive"].is_yes, presentation)
            for prop, verdict in v.items():
                if not verdict.is_unknown:
                    self.assertEqual(verify_evidence(verdict.evidence, presentation, SMALL), [],
                                     (prop, presentation.to_source()))


if __name__ == "__main__":
    unittest.main()
