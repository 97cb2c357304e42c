"""Evaluating predicted block texts against ground truth.

Predicted blocks are matched to ground-truth blocks by maximum hull IoU
(several predictions may land on one ground-truth block), each prediction
is aligned to its best fuzzy substring of the gold text, and the string
metrics are averaged over the matched pairs.
"""

from blockspot import Block, Document, evaluate, match_blocks
from blockspot.evaluation import render_table
from blockspot.model import Line, Quad


def line(line_id, text, x0, y0, x1, y1):
    return Line(
        id=line_id,
        box=Quad.from_points([[x0, y0], [x1, y0], [x1, y1], [x0, y1]]),
        text=text,
    )


# ground truth: one two-line block with gold order and gold text
gt = Document(
    image_width=500,
    image_height=200,
    lines=(
        line(0, "20 REASONS", 310, 20, 420, 60),
        line(1, "TO LOVE CYCLING", 0, 10, 300, 90),
    ),
    blocks=(Block(line_ids=(0, 1), text="20 REASONS TO LOVE CYCLING"),),
    is_ground_truth=True,
)

# the detector split the block in two, and recognition garbled some text
pred = Document(
    image_width=500,
    image_height=200,
    lines=(
        line(0, "20 REA5ONS", 312, 22, 418, 58),
        line(1, "TO LOVE CYCLNG", 2, 12, 298, 88),
    ),
    blocks=(
        Block(line_ids=(0,), text="20 REA5ONS"),
        Block(line_ids=(1,), text="TO LOVE CYCLNG"),
    ),
)

print("block matching (pred -> gt, IoU):")
for p, g, value in match_blocks(pred, gt):
    print(f"  {p} -> {g}  ({value:.3f})")

report = evaluate(pred, gt)
print("\nper-pair alignment:")
for pair in report.pairs:
    print(f"  {pair.pred_text!r} ~ {pair.gt_substring!r}"
          f"  nld={pair.metrics.nld:.3f} jw={pair.metrics.jaro_winkler:.3f}"
          f" ro={pair.metrics.ratcliff_obershelp:.3f}")

print()
print(render_table(report))
