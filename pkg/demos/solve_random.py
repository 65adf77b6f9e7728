"""Generate a small wide instance, solve it, and compare with the brute-force optimum.

Run:  python3 demos/solve_random.py [seed]
"""
import sys
from fractions import Fraction

from wideknap.driver import SolveOptions, pas_solve
from wideknap.model import Profile, generate_instance, validate_packing
from wideknap.oracle import opt_pack

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 3
inst = generate_instance(seed, Profile(box_w=(4, 6), box_h=(2, 4), n_items=(3, 6)))
print(f"box {inst.box.n1} x {inst.box.n2}, {len(inst.items)} items")
for it in inst.items:
    print(f"  item {it.id}: {it.w} x {it.h}")

# Ask for as many items as the optimum packs, so the guarantee is meaningful.
opt = opt_pack(inst)
inst = inst.with_k(max(opt.opt, 1))
print(f"optimum packs {opt.opt} items; asking for k = {inst.k}")

for eps in (Fraction(1, 2), Fraction(1, 3)):
    rep = pas_solve(inst, eps, SolveOptions(coloring_seed=seed))
    size = 0 if rep.packing is None else len(rep.packing)
    ok = rep.packing is None or bool(validate_packing(inst, rep.packing))
    print(f"eps {eps}: verdict {rep.verdict}, packed {size}, guaranteed {rep.guarantee}, valid {ok}")
    if rep.packing is not None:
        for i, q in rep.packing:
            print(f"    item {i} at ({q.x}, {q.y})")
