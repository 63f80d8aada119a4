from GShift import classify_presentation

# Load your presentation
with open("corpus/outward_step.gsh", "r") as f:
    text = f.read()

# Basic Example: classify the shift semigroup in one step
result = classify_presentation(text)

for prop, verdict in result.verdicts.items():
    print(f"{prop}: {verdict.outcome.value} ({verdict.reason})")
print(f"diagram: {result.diagram}")
