"""Independent reference implementations (oracles) and world generators.

Everything here is deliberately written from first principles, separate
from the package code paths it checks: a reduce-style FNV-1a, a
character-walk tokenizer, pure-python embedding accumulation, a
filter-then-rank search, and an eigendecomposition-based 2D projection.
"""

from __future__ import annotations

import math
import random
from functools import reduce
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

DIM = 256


# -- reference FNV-1a / tokenizer / embedding --------------------------------


def ref_fnv1a_64(data: bytes) -> int:
    return reduce(
        lambda h, b: ((h ^ b) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF,
        data,
        0xCBF29CE484222325,
    )


def ref_tokenize(text: str) -> List[str]:
    tokens, current = [], []
    for ch in text.lower():
        if ch.isalnum() and ch != "_":
            current.append(ch)
        else:
            if current:
                tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


def ref_embed(text: str) -> List[float]:
    vec = [0.0] * DIM
    for token in ref_tokenize(text):
        h = ref_fnv1a_64(token.encode("utf-8"))
        sign = 1.0 if h < 2**63 else -1.0
        vec[h % DIM] += sign
    norm = math.sqrt(sum(v * v for v in vec))
    if norm > 0.0:
        vec = [v / norm for v in vec]
    return vec


def ref_metadata_text(doc: Dict[str, Any]) -> str:
    parts = [doc["path"].rsplit("/", 1)[-1], doc["mode"], doc["format"], doc["category"]]
    parts.extend(sorted(doc["labels"]))
    parts.append(doc["description"])
    return " ".join(p for p in parts if p)


# -- reference filter-then-rank search ----------------------------------------


def ref_visible(doc: Dict[str, Any], user: Optional[str]) -> bool:
    return doc["privilege"] == "public" or doc["owner"] == user


def ref_filter_match(doc: Dict[str, Any], flt: Dict[str, Any]) -> bool:
    if "mode" in flt and doc["mode"] != flt["mode"]:
        return False
    if "format" in flt and doc["format"] != flt["format"]:
        return False
    if "category" in flt and doc["category"] != flt["category"]:
        return False
    if "labels" in flt and not (set(flt["labels"]) & set(doc["labels"])):
        return False
    if "privilege" in flt and doc["privilege"] != flt["privilege"]:
        return False
    if "realtime" in flt and doc["realtime"] != flt["realtime"]:
        return False
    if "time_range" in flt:
        cand = doc.get("time_range")
        if cand is None:
            return False
        qs, qe = flt["time_range"]
        if cand[0] > qe or qs > cand[1]:
            return False
    if "spatial_bbox" in flt:
        geo = doc.get("geo")
        if geo is None:
            return False
        b = flt["spatial_bbox"]
        if "lat" in geo:
            if not (b["min_lat"] <= geo["lat"] <= b["max_lat"]
                    and b["min_lon"] <= geo["lon"] <= b["max_lon"]):
                return False
        else:
            if (geo["min_lat"] > b["max_lat"] or b["min_lat"] > geo["max_lat"]
                    or geo["min_lon"] > b["max_lon"] or b["min_lon"] > geo["max_lon"]):
                return False
    return True


def ref_search(
    docs: Dict[str, Dict[str, Any]],
    query: str,
    flt: Dict[str, Any],
    k: int,
    user: Optional[str],
) -> List[Tuple[str, str, float, str]]:
    """Brute-force rank of every visible, filter-matching doc."""
    qv = ref_embed(query)
    scored = []
    for entity_id, doc in docs.items():
        if not ref_visible(doc, user) or not ref_filter_match(doc, flt):
            continue
        dv = ref_embed(ref_metadata_text(doc))
        sim = sum(a * b for a, b in zip(qv, dv))
        scored.append((entity_id, doc["path"], sim, doc["mode"]))
    scored.sort(key=lambda t: (-t[2], t[1]))
    return scored[:k]


# -- reference 2D projection ---------------------------------------------------


def ref_project_2d(vectors: np.ndarray) -> np.ndarray:
    """Eigendecomposition of the sample covariance, top-2 components."""
    x = np.asarray(vectors, dtype=np.float64)
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / max(len(x) - 1, 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:2]
    coords = centered @ eigvecs[:, order]
    if coords.shape[1] < 2:
        coords = np.pad(coords, ((0, 0), (0, 2 - coords.shape[1])))
    for j in range(2):
        i = int(np.argmax(np.abs(coords[:, j])))
        if coords[i, j] < 0:
            coords[:, j] = -coords[:, j]
    return coords


# -- random world generation -----------------------------------------------------


WORDS = (
    "maize wheat soy sorghum yield drought nitrogen soil moisture canopy "
    "irrigation harvest biomass phenotype genotype sensor drone field plot "
    "spectral thermal rainfall growth stress leaf root trial"
).split()

MODES = ("data", "tool", "model", "collection")
FORMATS = ("csv", "png", "tif", "shp", "py", "none", "txt")
CATEGORIES = ("", "soil", "weather", "imagery", "genomics")


def random_doc(rng: random.Random, owner: str, seq: int) -> Dict[str, Any]:
    name = f"{rng.choice(WORDS)}_{seq}.{rng.choice(FORMATS[:5])}"
    doc = {
        "path": f"/{owner}/ag_data/{name}",
        "mode": rng.choice(MODES),
        "format": rng.choice(FORMATS),
        "category": rng.choice(CATEGORIES),
        "labels": sorted(rng.sample(WORDS, rng.randint(0, 3))),
        "privilege": rng.choice(("public", "private")),
        "realtime": rng.random() < 0.2,
        "time_range": None,
        "geo": None,
        "owner": owner,
        "description": " ".join(rng.choices(WORDS, k=rng.randint(0, 6))),
    }
    if rng.random() < 0.5:
        start = rng.randint(1_500_000_000, 1_700_000_000)
        doc["time_range"] = [start, start + rng.randint(0, 10_000_000)]
    roll = rng.random()
    if roll < 0.3:
        doc["geo"] = {"lat": rng.uniform(-90, 90), "lon": rng.uniform(-180, 180)}
    elif roll < 0.5:
        lat0, lon0 = rng.uniform(-80, 80), rng.uniform(-170, 170)
        doc["geo"] = {
            "min_lat": lat0,
            "min_lon": lon0,
            "max_lat": lat0 + rng.uniform(0, 10),
            "max_lon": lon0 + rng.uniform(0, 10),
        }
    return doc


def random_filter(rng: random.Random, docs: List[Dict[str, Any]]) -> Dict[str, Any]:
    flt: Dict[str, Any] = {}
    template = rng.choice(docs)
    if rng.random() < 0.4:
        flt["mode"] = rng.choice((template["mode"], rng.choice(MODES)))
    if rng.random() < 0.3:
        flt["format"] = rng.choice((template["format"], rng.choice(FORMATS)))
    if rng.random() < 0.25:
        flt["category"] = rng.choice(CATEGORIES)
    if rng.random() < 0.3:
        flt["labels"] = sorted(set(rng.sample(WORDS, rng.randint(1, 3))))
    if rng.random() < 0.3:
        flt["privilege"] = rng.choice(("public", "private"))
    if rng.random() < 0.2:
        flt["realtime"] = rng.random() < 0.5
    if rng.random() < 0.3:
        start = rng.randint(1_500_000_000, 1_690_000_000)
        flt["time_range"] = (start, start + rng.randint(0, 50_000_000))
    if rng.random() < 0.3:
        lat0, lon0 = rng.uniform(-80, 60), rng.uniform(-170, 150)
        flt["spatial_bbox"] = {
            "min_lat": lat0,
            "min_lon": lon0,
            "max_lat": lat0 + rng.uniform(0, 40),
            "max_lon": lon0 + rng.uniform(0, 40),
        }
    return flt


def random_query(rng: random.Random) -> str:
    return " ".join(rng.choices(WORDS, k=rng.randint(1, 4)))


# -- deterministic factories -------------------------------------------------------


def sequential_ids(prefix: int = 0):
    counter = [0]

    def make() -> str:
        counter[0] += 1
        return f"00000000-0000-4000-8000-{prefix:02x}{counter[0]:010x}"

    return make


def ticking_clock(start: int = 1_750_000_000, step: int = 1):
    state = [start]

    def now() -> int:
        state[0] += step
        return state[0]

    return now


def sequential_keys():
    counter = [0]

    def make() -> str:
        counter[0] += 1
        return f"{counter[0]:064x}"

    return make


# -- NDVI fixture tool ---------------------------------------------------------------


NDVI_TOOL_SOURCE = """\
import argparse, csv

parser = argparse.ArgumentParser()
parser.add_argument("--red", required=True)
parser.add_argument("--nir", required=True)
parser.add_argument("--out", required=True)
args = parser.parse_args()

def load(path):
    with open(path) as fh:
        return [[float(x) for x in row] for row in csv.reader(fh) if row]

red = load(args.red)
nir = load(args.nir)
rows = [
    [(n - r) / (n + r) for r, n in zip(rrow, nrow)]
    for rrow, nrow in zip(red, nir)
]
with open(args.out, "w", newline="") as fh:
    csv.writer(fh).writerows(rows)
"""


def grid_to_csv(grid: List[List[float]]) -> bytes:
    return ("\n".join(",".join(str(v) for v in row) for row in grid) + "\n").encode()


def csv_to_grid(data: bytes) -> List[List[float]]:
    return [
        [float(x) for x in line.split(",")]
        for line in data.decode().strip().splitlines()
        if line
    ]


def ndvi_expected(red: List[List[float]], nir: List[List[float]]) -> List[List[float]]:
    return [
        [(n - r) / (n + r) for r, n in zip(rrow, nrow)]
        for rrow, nrow in zip(red, nir)
    ]
