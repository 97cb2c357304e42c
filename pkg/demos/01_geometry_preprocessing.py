"""Per-line geometry: rotation snapping, crop windows, recognizer splits, IoU.

Every detected line arrives as a quadrilateral. Before recognition the
line is rotated to the nearest axis, cropped, and cut into parts that
keep the recognizer's 32x128 aspect ratio.
"""

from blockspot import RecognizerSpec, crop_rect, iou, snap_rotation, split_for_recognizer
from blockspot.geometry import rotate_point

# a 400x50 line tilted by 30 degrees
upright = [(100, 300), (500, 300), (500, 350), (100, 350)]
tilted = [rotate_point(p, 30.0) for p in upright]

theta = snap_rotation(tilted)
print(f"detected tilt compensated by rotating {theta:+.1f} degrees")

crop = crop_rect(tilted, theta)
print(f"crop window after rotation: {crop.width:.0f} x {crop.height:.0f} px")

spec = RecognizerSpec()  # height 32, width 128 -> aspect 4.0
parts = split_for_recognizer(crop, spec)
print(f"split into {len(parts)} parts of {parts[0].width:.1f} px each:")
for i, part in enumerate(parts):
    print(f"  part {i}: x {part.x_min:7.1f} .. {part.x_max:7.1f}  (aspect {part.width/part.height:.2f})")

# steeper than 45 degrees snaps to the y-axis instead
steep = [rotate_point(p, 75.0) for p in upright]
print(f"\na 75-degree line instead rotates by {snap_rotation(steep):+.1f} degrees (to the y-axis)")

# exact IoU between rotated boxes, used later for block matching
a = [(0, 0), (4, 0), (4, 4), (0, 4)]
b = [rotate_point(p, 45.0) for p in [(-3, -3), (1, -3), (1, 1), (-3, 1)]]
print(f"\nIoU of an axis-aligned square and a rotated one: {iou(a, b):.4f}")
print(f"IoU of a box with itself: {iou(a, a):.1f}")
