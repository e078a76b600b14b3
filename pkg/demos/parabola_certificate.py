"""A curved variety in the ball lacks the extension property; a flat slice has it.

On the parabola V = 0.9 (t, t^2) some polynomial bounded by 1 on V separates
two points of V further than any holomorphic map of the ball can, so it has
no norm-preserving extension.  On a complex line through 0 the Kobayashi
distance is already attained by a linear functional and no margin appears.
"""

from holoext import domains, extension_lab as lab, hyperbolic as hyp

ball = domains.ball(2)
for spec in (lab.parabola_curve(), lab.ball_slice(1)):
    sample = lab.sample_variety(spec, 12, 0)
    geo = lab.totally_geodesic_test(ball, sample, 10, 0, 1e-9)
    cert = lab.certificate_search(ball, sample, hyp.Datum(sample.points[2], sample.points[3]), 2, 1000, 0)
    print(f"{spec.kind:>15}: totally geodesic {geo.passed!s:5}  "
          f"achieved {cert.achieved:.6f}  Kobayashi {cert.baseline:.6f}  margin {cert.margin:+.2e}")
