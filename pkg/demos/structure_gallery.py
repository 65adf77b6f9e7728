"""Turn a random wide packing into structured form and render it as SVG.

Run:  python3 demos/structure_gallery.py [out_dir]
Each SVG shows the packed rectangles and the cutting polylines between regions.
"""
import sys
from fractions import Fraction
from pathlib import Path

from wideknap.geometry import Box
from wideknap.model import generate_packing
from wideknap.structure import structural_transform, verify_structured
from wideknap.svg import render_svg

out = Path(sys.argv[1] if len(sys.argv) > 1 else "gallery")
out.mkdir(parents=True, exist_ok=True)
eps, ell = Fraction(1, 2), 1

for seed in range(6):
    inst, pk = generate_packing(seed, Box(16, 8), 10, 2 * ell)
    sp = structural_transform(pk, eps, ell, inst.box)
    rep = verify_structured(sp, inst.items)
    kept = len(sp.packing)
    print(f"seed {seed}: {len(pk)} packed, {kept} kept, "
          f"{len(sp.polylines)} polylines, verified {rep['ok']}")
    (out / f"structured_{seed}.svg").write_text(render_svg(sp.box, sp.packing, sp.polylines))
print(f"wrote SVGs to {out}/")
