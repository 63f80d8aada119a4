from GShift.oracle import expansivity_crosscheck, random_instance, standard_sweeps

# Step 1: one random finite instance, checked against every H by hand
inst = random_instance(seed=3, m=4, k=2, g=2)
print(inst)
for H in ([0], [0, 1], [0, 1, 2, 3]):
    check = expansivity_crosscheck(inst, H)
    print(f"H={H}: definition {check.definition_verdict}, T.H covers {check.combinatorial_verdict}")

# Step 2: the sweeps the oracle command runs
for report in standard_sweeps(seed=0, random_count=100):
    print(f"{report.name}: {report.instances} instances, {report.checks} checks, "
          f"{len(report.disagreements)} disagreements")
