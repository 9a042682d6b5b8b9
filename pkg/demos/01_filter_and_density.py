"""
Filtering detections and naming the crowd level
===============================================

A detector emits candidates of many classes. Only ``person`` boxes whose
confidence is strictly above 0.5 are kept, and the number of people being
tracked decides the crowd level.
"""

from crowdlevel import classify_density, filter_persons, parse_detection_stream

lines = [
    '{"frame":0,"x1":10,"y1":20,"x2":50,"y2":120,"confidence":0.83,"label":"person"}',
    '{"frame":0,"x1":200,"y1":20,"x2":240,"y2":120,"confidence":0.50,"label":"person"}',
    '{"frame":0,"x1":300,"y1":50,"x2":380,"y2":110,"confidence":0.97,"label":"dog"}',
]
(frame, records), = parse_detection_stream(lines)
kept = filter_persons(records)
print(f"frame {frame}: {len(records)} candidates, {len(kept)} kept")
for d in kept:
    print("  ", d.box, d.confidence)

# %%
# The three levels and where their boundaries fall with default thresholds.
for n in (0, 14, 15, 25, 26, 40):
    print(f"{n:3d} people -> {classify_density(n).label}")
