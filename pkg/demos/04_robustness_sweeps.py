"""Reproduce the robustness experiments on the synthetic suite: box
segmentation under increasingly loose boxes, and error-tolerant scribbles
under increasing amounts of wrong foreground seeds. Writes CSV reports to
demos/out/.
"""

from pathlib import Path

from cdseg import SigmaStrategy, fixture_suite, run_looseness_sweep, run_scribble_error_sweep
from cdseg.scribbles import ScribbleProtocol

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

fixtures = fixture_suite()
strategy = SigmaStrategy(mode="single", value=0.15)

loose = run_looseness_sweep(fixtures, strategy=strategy)
(OUT / "looseness_sweep.csv").write_text(loose.to_csv())
print("box-mode mean error by looseness:")
for level in (0, 120, 240, 600):
    print(f"  L={level:4d}%: {loose.mean('error_rate', f'L={level}'):.4f}")

errors = run_scribble_error_sweep(fixtures, ScribbleProtocol(seed=0), strategy=strategy)
(OUT / "scribble_error_sweep.csv").write_text(errors.to_csv())
print("error-tolerant mean Jaccard by error percentage:")
for pct in (0, 10, 20, 40, 60, 80, 100):
    print(f"  {pct:3d}% errors: {errors.mean('jaccard', f'errors={pct}%'):.4f}")

print(f"CSV reports under {OUT}")
