"""Record real service responses as test fixtures.

Runs the JSON service in-process and saves {request, response} pairs the
frontend tests replay through a mocked fetch. Re-run after any service
change:

    python3 frontend/scripts/record_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from perflaw.service import create_app

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

SWEEP_ARCH = {"layers": 80, "hidden": 8192, "ffn": 28672, "size": 70, "tokens": 15}

FIXTURES = {
    "predict_dense": (
        "POST", "/v1/predict/dense",
        {"layers": 32, "hidden": 4096, "ffn": 14336, "size": 7, "tokens": 3},
    ),
    "predict_moe_giant": (
        "POST", "/v1/predict/moe",
        {"layers": 1300, "hidden": 51200, "ffn": 65536, "expert_ffn": 65536,
         "size": 125000, "act": 22000, "gamma": 1.9, "tokens": 100},
    ),
    "predict_dense_invalid": (
        "POST", "/v1/predict/dense",
        {"layers": 32, "hidden": 4096, "ffn": 14336, "size": 7, "tokens": -1},
    ),
    "sweep_tokens_gamma_1_0": (
        "POST", "/v1/sweep",
        {"variable": "tokens", "lo": 1, "hi": 60, "steps": 13,
         "arch": dict(SWEEP_ARCH, gamma=1.0)},
    ),
    "sweep_tokens_gamma_1_5": (
        "POST", "/v1/sweep",
        {"variable": "tokens", "lo": 1, "hi": 60, "steps": 13,
         "arch": dict(SWEEP_ARCH, gamma=1.5)},
    ),
    "expand_predict": (
        "POST", "/v1/expand/predict",
        {"small": {"layers": 32, "hidden": 4096, "ffn": 14336, "size": 7},
         "small_tokens": 3.0,
         "large": {"layers": 80, "hidden": 8192, "ffn": 28672, "size": 70},
         "large_tokens": 1.0},
    ),
    "expand_optimize": (
        "POST", "/v1/expand/optimize",
        {"small": {"layers": 32, "hidden": 8192, "ffn": 28672, "size": 7},
         "large": {"layers": 512, "hidden": 8192, "ffn": 28672, "size": 70},
         "total_tokens": 4.0, "grid": 21},
    ),
    "zoo_report": ("GET", "/v1/zoo/report", None),
    "weights": ("GET", "/v1/weights", None),
}


def main() -> None:
    client = TestClient(create_app())
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, (method, path, body) in FIXTURES.items():
        if method == "GET":
            response = client.get(path)
        else:
            response = client.post(path, json=body)
        fixture = {
            "method": method,
            "path": path,
            "request": body,
            "status": response.status_code,
            "response": response.json(),
        }
        out = OUT_DIR / f"{name}.json"
        out.write_text(json.dumps(fixture, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {out.relative_to(OUT_DIR.parent.parent)} "
              f"(HTTP {response.status_code})")


if __name__ == "__main__":
    main()
