"""Refute every small binary cap claimed at r = 5."""

from collections import Counter

from ffbench import build_cs_4cap, check_relations, refute_five, verify_witness
from ffbench.binary import corpus, encode_box_cap

chains = Counter()
total = 0
for cap in corpus(max_nodes=5):
    wit = refute_five(cap)
    assert verify_witness(cap, wit)
    total += 1
    if wit.failure is not None:
        chains[len(wit.chain)] += 1
print(f"{total} binary caps with at most 5 boxes, all refuted")
print("hard-chain length before the required box is missing or too small:", dict(sorted(chains.items())))

enc = encode_box_cap(build_cs_4cap())
print("\n4-cap encoding at r=4 satisfies the relations:", check_relations(enc).ok)
wit = refute_five(encode_box_cap(build_cs_4cap(), 5))
print("at r=5 it is refuted by:")
for word, rel, detail in wit.relation_violations:
    print(f"  {word or 'λ'}: {rel}  ({detail})")
