# A walk through the classical impossibility results at two voters and three
# alternatives, decided by the backtracking search and cross-checked by SAT.
#
#   python3 demos/impossibility_tour.py

from choicesat.theorems import run_scenario

#%% Arrow: weak Pareto plus IIA leaves only the two dictatorships
arrow = run_scenario("arrow", engine="both")
print("arrow     ", arrow.status, "census", arrow.count, "dictators", arrow.classification["census_dictators"])

#%% Wilson: drop Pareto, add non-imposition; anti-dictatorships join the survivors
wilson = run_scenario("wilson", engine="both")
print("wilson    ", wilson.status, "census kinds", wilson.classification["census_kinds"])

#%% Gibbard-Satterthwaite and Muller-Satterthwaite for choice functions
for name in ("gs", "ms"):
    r = run_scenario(name, engine="both")
    print(f"{name:<10}", r.status, "engines agree", r.engines_agree)

#%% The liberal paradox (scenario "sen"), under each reading of decisiveness
for mode in ("pair", "weak", "strict"):
    r = run_scenario("sen", engine="both", decisive=mode)
    print(f"sen/{mode:<6}", r.status)

#%% Moulin: on single-peaked preferences the survivors are the median rules
moulin = run_scenario("moulin")
print("moulin    ", moulin.count, "rules, phantoms", moulin.classification["phantoms"])

#%% Kannai-Peleg: no weak order on the subsets of six items meets GF and IND
for size in (5, 6):
    r = run_scenario("kp", size=size)
    print(f"kp size {size}", r.status, f"{r.stats['time_ms']} ms")
