"""
Measuring throughput
====================

fps is cumulative: frames processed so far divided by the fractional seconds
since the meter started. For file replay a fixed elapsed time can be pinned.
"""

import time

from crowdlevel import FpsMeter, FpsUndefinedError

meter = FpsMeter()
for _ in range(50):
    time.sleep(0.002)
    meter.tick()
print(f"wall clock: {meter.fps():.1f} fps over {meter.elapsed():.3f} s")

replay = FpsMeter(elapsed_override=4.0)
replay.tick(100)
print("replay:", replay.fps(), "fps")

replay.elapsed_override = 0.0
try:
    replay.fps()
except FpsUndefinedError as exc:
    print("at t=0:", exc)
