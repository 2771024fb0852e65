"""Regenerate the bundled scenario files under scenarios/."""

import json
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "scenarios"


def polygon(cx, cy, r, sides, rng, jitter=0.25):
    phase = rng.uniform(0, 2 * math.pi)
    ring = []
    for k in range(sides):
        t = phase + 2 * math.pi * k / sides
        rr = r * (1 - jitter * rng.random())
        ring.append([round(cx + rr * math.cos(t), 6), round(cy + rr * math.sin(t), 6)])
    ring.append(ring[0])
    return ring


def collection(rings):
    return {
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature", "properties": {"id": i}, "geometry": {"type": "Polygon", "coordinates": [r]}}
            for i, r in enumerate(rings)
        ],
    }


def dump(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2) + "\n")


def rect(x0, y0, x1, y1):
    return [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]


def aegean(rng, count=20, span=100.0, blocking=5):
    islands = []
    while len(islands) < count:
        k = len(islands)
        if k < blocking:
            cx = 10.0 + (span - 20.0) * (k + 0.5) / blocking + rng.uniform(-0.75, 0.75)
            r = rng.uniform(4.5, 6.0)
            cy = rng.uniform(-0.3 * r, 0.3 * r)
        else:
            cx = rng.uniform(10.0, span - 10.0)
            r = rng.uniform(2.5, 5.0)
            cy = max(-40.0, min(40.0, rng.gauss(0.0, 12.0)))
        if all(math.hypot(cx - x, cy - y) > r + q + 2.5 for x, y, q in islands):
            islands.append((cx, cy, r))
    islands.sort()
    return [polygon(x, y, r, rng.randint(6, 9), rng) for x, y, r in islands]


def write_env(stem, origin, cell, nx, ny, f):
    dump(stem + ".json", {"origin": list(origin), "cell": cell, "nx": nx, "ny": ny})
    lines = ["x,y,vx,vy,wx,wy"]
    for j in range(ny):
        for i in range(nx):
            x = origin[0] + i * cell
            y = origin[1] + j * cell
            vals = [round(v, 6) for v in f(x, y)]
            lines.append(",".join(repr(v) for v in [x, y] + vals))
    (OUT / (stem + ".csv")).write_text("\n".join(lines) + "\n")


def solver(seed, **extra):
    s = {"seed": seed, "deterministic": True, "workers": 1}
    s.update(extra)
    return s


def main():
    OUT.mkdir(exist_ok=True)
    rng = random.Random(20)

    dump("straight.json", {
        "schema_version": 1,
        "name": "straight",
        "departure": {"x": 0.0, "y": 0.0},
        "arrival": {"x": 100.0, "y": 0.0},
        "alpha": 1.0,
        "solver": solver(1),
    })

    dump("single_square.geojson", collection([rect(40.0, -10.0, 60.0, 10.0)]))
    dump("single_square.json", {
        "schema_version": 1,
        "name": "single-square",
        "departure": {"x": 0.0, "y": 0.0},
        "arrival": {"x": 100.0, "y": 0.0},
        "obstacles": "single_square.geojson",
        "alpha": 1.0,
        "solver": solver(2),
    })

    dump("aegean20.geojson", collection(aegean(rng)))
    dump("aegean20.json", {
        "schema_version": 1,
        "name": "aegean20",
        "departure": {"x": 0.0, "y": 0.0},
        "arrival": {"x": 100.0, "y": 0.0},
        "obstacles": "aegean20.geojson",
        "alpha": 1.0,
        "solver": solver(3),
    })

    dump("aegean20_bench.json", {
        "schema_version": 1,
        "name": "aegean20-bench",
        "departure": {"x": 0.0, "y": 0.0},
        "arrival": {"x": 100.0, "y": 0.0},
        "obstacles": "aegean20.geojson",
        "alpha": 1.0,
        "solver": solver(7, deterministic=False,
                         levels=[{"resolution": 6, "islands": 1, "anneal_rate": 0.2},
                                 {"resolution": 8, "islands": 1, "anneal_rate": 0.1},
                                 {"resolution": 10, "islands": 2, "anneal_rate": 0.05}],
                         termination={"max_generations": 150, "plateau": None}),
    })

    write_env("aegean20_wind", (0.0, -100.0), 5.0, 21, 41,
              lambda x, y: (0.4, 0.3 * math.sin(x / 15.0), 0.2 * math.cos(y / 20.0), 0.1))
    dump("aegean20_weather.json", {
        "schema_version": 1,
        "name": "aegean20-weather",
        "departure": {"x": 0.0, "y": 0.0},
        "arrival": {"x": 100.0, "y": 0.0},
        "obstacles": "aegean20.geojson",
        "environment": "aegean20_wind.csv",
        "alpha": 0.7,
        "solver": solver(4),
    })

    dump("oracle.geojson", collection([rect(1.5, -1.0, 3.5, 3.0), rect(6.0, -4.0, 8.5, 0.5)]))
    dump("oracle.json", {
        "schema_version": 1,
        "name": "oracle",
        "departure": {"x": 0.0, "y": 0.0},
        "arrival": {"x": 10.0, "y": 0.0},
        "obstacles": "oracle.geojson",
        "alpha": 1.0,
        "free_waypoints": 3,
        "solver": solver(5, levels=[{"resolution": 4, "islands": 1, "anneal_rate": 0.0}],
                         island={"population_size": 80, "lambda0": 1e6, "migration_interval": 10},
                         termination={"max_generations": 200, "plateau": None}),
        "baselines": {"brute": {"resolution": 4, "lambda": 1e6}},
    })

    dep, arr = (40.5197, 22.9709), (35.1508, 25.7227)
    isles = []
    for k in range(6):
        t = (k + 1) / 7
        lat = dep[0] + t * (arr[0] - dep[0]) + rng.uniform(-0.15, 0.15)
        lon = dep[1] + t * (arr[1] - dep[1]) + rng.uniform(-0.15, 0.15)
        ring = polygon(lon, lat, rng.uniform(0.08, 0.2), rng.randint(6, 9), rng, jitter=0.2)
        isles.append(ring)
    dump("thessaloniki.geojson", collection(isles))
    dump("thessaloniki.json", {
        "schema_version": 1,
        "name": "thessaloniki-agios-nikolaos",
        "frame": "geographic",
        "departure": {"lat": dep[0], "lon": dep[1]},
        "arrival": {"lat": arr[0], "lon": arr[1]},
        "obstacles": "thessaloniki.geojson",
        "alpha": 1.0,
        "ship": {"speed": 15.0},
        "solver": solver(6),
    })


if __name__ == "__main__":
    main()
