"""
Detent clicks
=============

A stepped instrument knob snaps to discrete gear positions through a
passive spring-damper force.  Ramping an external torque walks the knob
from click to click; releasing it lets the knob settle into the nearest
detent.
"""

import numpy as np

from labmech import DetentProfile, KnobState, detent_force, nearest_detent, step_knob

# a 6-position rotary knob, one click every 30 degrees
positions = np.radians(np.arange(6) * 30.0)
profile = DetentProfile(positions=positions, stiffness=0.8, damping=0.12)
print(f"detents at {np.degrees(profile.positions).round(0)} degrees")

# the force is zero at each detent and restoring in between
q = np.radians(40.0)
print(f"force at 40 deg (between clicks 1 and 2): {detent_force(profile, q, 0.0):+.4f}")

# the escape threshold is stiffness times half the click spacing
threshold = profile.stiffness * np.diff(positions).min() / 2.0
print(f"escape torque: {threshold:.3f} (pulsing at {1.5 * threshold:.3f})")

# drive with short super-threshold pulses: one click per pulse
state = KnobState(q=0.0, qdot=0.0, inertia=2e-3)
dt = 1e-3
clicks = [nearest_detent(profile, state.q)]
for step in range(5500):
    in_pulse = (step % 1000) < 300  # 0.3 s pulse every second
    state = step_knob(profile, state, 1.5 * threshold if in_pulse else 0.0, dt)
    index = nearest_detent(profile, state.q)
    if index != clicks[-1]:
        clicks.append(index)
        print(f"  t={step * dt:5.2f}s  click -> position {index} "
              f"({np.degrees(profile.positions[index]):.0f} deg)")

print("letting the knob settle...")
for _ in range(4000):
    state = step_knob(profile, state, 0.0, dt)
final = nearest_detent(profile, state.q)
print(f"settled at position {final}, "
      f"{np.degrees(abs(state.q - profile.positions[final])):.5f} deg off the detent")
