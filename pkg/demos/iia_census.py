# The 94 two-voter, three-alternative welfare functions satisfying IIA, split
# into kinds, with the pairwise-decomposition count as an oracle.
#
#   python3 demos/iia_census.py

from collections import Counter

from choicesat.oracles import iia_pairwise_oracle
from choicesat.prefcore import Domain
from choicesat.search import SearchSpec, enumerate_models
from choicesat.theorems import classify_iia_rule

rules = enumerate_models(SearchSpec.build("aswf", Domain.full(3), 2, "iia"), 1000)
print(len(rules), "IIA rules; pairwise oracle says", iia_pairwise_oracle(2, 3))

kinds = [classify_iia_rule(r) for r in rules]
print(Counter(k["kind"] for k in kinds))

#%% every rule outside the (anti-)dictatorships moves between at most two adjacent orders
others = [k for k in kinds if k["kind"] in ("constant", "other")]
print(Counter((k["range_size"], k["max_kendall"]) for k in others))
for k in others[6:10]:
    print(k["range"])
