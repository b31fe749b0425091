"""
The plane picture
=================

Reading the digits of r after a binary point gives M(r) in [0, 2]. Plotting
(M(r), M(Q(r))) for every residue below 2^12 gives a fractal-looking set with
exact self-affine pieces. This writes the SVG figures to the current
directory.
"""

from paritylab import box_counting_stats, box_cover, check_self_affine, generate_arrays, rational_points
from paritylab.embedding import alpha, check_square_pair, render_squares_svg, render_svg

ps = generate_arrays(12)
with open("plane_set.svg", "w") as fh:
    fh.write(render_svg(ps))
with open("plane_set_boxes.svg", "w") as fh:
    fh.write(render_svg(generate_arrays(14), box_cover(6)))
with open("squares.svg", "w") as fh:
    fh.write(render_squares_svg(range(2, 8), 18))

for p in rational_points():
    x, y = p.as_fractions()
    print(f"{str(p.parameter):>5}  ({x}, {y})")

# the piece over alpha_k, halved and shifted, is exactly the piece over 2 alpha_k + 1
for k in range(2, 8):
    print(k, alpha(k), check_self_affine(alpha(k), k), check_square_pair(k, 16))

for row in box_counting_stats(12):
    print(row.k, row.boxes, round(row.ratio, 4))
