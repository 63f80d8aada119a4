from GShift import AnalysisConfig, Classifier, SemigroupEngine, load_presentation
from GShift.core.patterns import Pattern
from GShift.main import verify_evidence

# Load a presentation and pick the analysis parameters
source = load_presentation("corpus/square.gsh")
presentation = source.presentation
config = AnalysisConfig(budget_orbit=2000, max_h=2)

# Step 1: orbits of single coordinates
engine = SemigroupEngine(presentation, config)
for w in (1, 2, -3):
    result = engine.orbit(w)
    print(f"orbit of {w}: {result.status.value}, first points {result.points()[:4]}")

# Step 2: the individual checks
classifier = Classifier(presentation, config, engine)
sensitive = classifier.check_sensitive()
expansive = classifier.check_expansive()
print(f"sensitive: {sensitive.outcome.value}, expansive: {expansive.outcome.value}")

# Step 3: a concrete sensitivity witness, re-checked offline
witness = classifier.sensitivity_witness(2, Pattern.constant(0), protected=[2, 4])
print(f"flip coordinate {witness.flipped_coord}, separated by {witness.word}")
print("witness failures:", verify_evidence(witness, presentation, config))
