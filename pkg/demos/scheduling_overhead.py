"""Scheduling cost of the broadcast relay pre-ordering.

Each frame spends N probe slots and N feedback slots organizing the
relay order before the N+1 data slots.  With probes much shorter than
data slots the fraction stays small even for large user counts.
"""

from ssafsim import overhead_fraction

print("overhead fraction, probe = feedback = 1% of a data slot")
print(f"{'N':>4} {'overhead':>9}")
for n in (2, 5, 10, 20, 50, 100):
    frac = overhead_fraction(n, probe_len=0.01, feedback_len=0.01, data_slot_len=1.0)
    print(f"{n:4d} {frac:9.4f}")

print("\nsame, with probes at 10% of a data slot")
for n in (2, 10, 50):
    frac = overhead_fraction(n, probe_len=0.1, feedback_len=0.1, data_slot_len=1.0)
    print(f"{n:4d} {frac:9.4f}")
