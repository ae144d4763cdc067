"""JSON HTTP API over datasets, binning, blur, and bin inspection.

Datasets are immutable once uploaded; responses are pure functions of
(dataset, parameters), so identical requests produce byte-identical
bodies. Stencils are cached per (sigma_x, sigma_y, epsilon, mode).
"""

from __future__ import annotations

import json
import os
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Literal

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .binning import BinGrid, CsvParseError, Dataset, bin_points, parse_csv, suggest_layout, top_labels
from .blur import BlurParams, KernelStencil, apply_blur, build_stencil
from .hexgrid import AxialCoord, HexLayout
from .render import COLORMAPS

DEFAULT_MAX_BODY = 64 * 1024 * 1024
DEFAULT_TARGET_BINS = 20


@dataclass(frozen=True)
class DatasetRecord:
    """One uploaded dataset; immutable after creation."""

    id: str
    name: str
    dataset: Dataset
    created_at: str

    @property
    def point_count(self) -> int:
        return len(self.dataset)

    def bounds_dict(self):
        if self.dataset.is_empty:
            return None
        min_x, max_x, min_y, max_y = self.dataset.bounds
        return {"min_x": min_x, "max_x": max_x, "min_y": min_y, "max_y": max_y}


class DatasetStore:
    """In-memory dataset registry with optional CSV persistence.

    With ``data_dir`` set, raw uploads are written as ``<id>.csv`` (plus a
    small metadata JSON) and reloaded on construction.
    """

    def __init__(self, data_dir: str | None = None):
        self._records: dict[str, DatasetRecord] = {}
        self._data_dir = data_dir
        if data_dir is not None:
            os.makedirs(data_dir, exist_ok=True)
            self._reload()

    def _reload(self):
        for fname in sorted(os.listdir(self._data_dir)):
            if not fname.endswith(".csv"):
                continue
            ds_id = fname[:-4]
            path = os.path.join(self._data_dir, fname)
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
            meta_path = os.path.join(self._data_dir, ds_id + ".json")
            name, created = ds_id, ""
            if os.path.exists(meta_path):
                with open(meta_path, "r", encoding="utf-8") as fh:
                    meta = json.load(fh)
                name = meta.get("name", name)
                created = meta.get("created_at", created)
            dataset, _ = parse_csv(text)
            self._records[ds_id] = DatasetRecord(ds_id, name, dataset, created)

    def add(self, csv_text: str, name: str | None = None) -> DatasetRecord:
        dataset, _ = parse_csv(csv_text)
        ds_id = uuid.uuid4().hex
        record = DatasetRecord(
            ds_id,
            name or ds_id,
            dataset,
            datetime.now(timezone.utc).isoformat(),
        )
        if self._data_dir is not None:
            with open(os.path.join(self._data_dir, ds_id + ".csv"), "w",
                      encoding="utf-8") as fh:
                fh.write(csv_text)
            with open(os.path.join(self._data_dir, ds_id + ".json"), "w",
                      encoding="utf-8") as fh:
                json.dump({"name": record.name, "created_at": record.created_at}, fh)
        self._records[ds_id] = record
        return record

    def get(self, ds_id: str) -> DatasetRecord | None:
        return self._records.get(ds_id)

    def list(self):
        return [self._records[k] for k in sorted(self._records)]


def _json_response(payload, status_code: int = 200) -> Response:
    # one fixed serialization so repeated requests are byte-identical
    body = json.dumps(payload, separators=(",", ":"), allow_nan=False)
    return Response(content=body, status_code=status_code,
                    media_type="application/json")


def _record_payload(record: DatasetRecord):
    return {
        "id": record.id,
        "name": record.name,
        "point_count": record.point_count,
        "bounds": record.bounds_dict(),
        "created_at": record.created_at,
    }


def _resolve_layout(dataset: Dataset,
                    size_x: float | None, size_y: float | None,
                    origin_x: float | None, origin_y: float | None) -> HexLayout:
    """Fill missing layout parameters from the data (origin at the data
    minimum, scales sized for DEFAULT_TARGET_BINS columns)."""
    if dataset.is_empty:
        return HexLayout(origin_x or 0.0, origin_y or 0.0, size_x or 1.0, size_y or 1.0)
    suggested = suggest_layout(dataset, DEFAULT_TARGET_BINS)
    return HexLayout(
        origin_x if origin_x is not None else suggested.origin_x,
        origin_y if origin_y is not None else suggested.origin_y,
        size_x if size_x is not None else suggested.scale_x,
        size_y if size_y is not None else suggested.scale_y,
    )


def _bins_payload(grid: BinGrid, params: dict):
    layout = grid.layout
    bins = []
    v_max = 0.0
    for a, agg in grid.sorted_items():
        cx, cy = layout.bin_center_data(a)
        bins.append({"q": a.q, "r": a.r, "cx": cx, "cy": cy,
                     "value": agg.total_weight})
        v_max = max(v_max, agg.total_weight)
    return {
        "layout": {
            "origin_x": layout.origin_x,
            "origin_y": layout.origin_y,
            "scale_x": layout.scale_x,
            "scale_y": layout.scale_y,
        },
        "bins": bins,
        "v_max": v_max,
        "params": params,
    }


def create_app(store: DatasetStore | None = None,
               allow_origin: str = "*",
               max_body_bytes: int = DEFAULT_MAX_BODY,
               ui_dir: str | None = None) -> FastAPI:
    store = store if store is not None else DatasetStore()
    app = FastAPI(title="hexblur", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[allow_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    stencil_cache: dict[tuple[float, float, float, str], KernelStencil] = {}

    def get_record(ds_id: str) -> DatasetRecord:
        record = store.get(ds_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {ds_id}")
        return record

    def get_stencil(params: BlurParams) -> KernelStencil:
        key = (params.sigma_x, params.sigma_y, params.epsilon, params.mode)
        stencil = stencil_cache.get(key)
        if stencil is None:
            # deterministic construction: concurrent duplicate inserts are harmless
            stencil = build_stencil(params)
            stencil_cache[key] = stencil
        return stencil

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/colormaps")
    def colormaps():
        return list(COLORMAPS)

    @app.get("/api/datasets")
    def list_datasets():
        return _json_response([_record_payload(r) for r in store.list()])

    @app.post("/api/datasets", status_code=201)
    async def upload_dataset(request: Request, name: str | None = None):
        body = await request.body()
        if len(body) > max_body_bytes:
            raise HTTPException(status_code=413, detail="dataset too large")
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise HTTPException(status_code=400, detail=f"not UTF-8: {exc}") from None
        try:
            record = store.add(text, name=name)
        except CsvParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return _json_response(_record_payload(record), status_code=201)

    @app.get("/api/datasets/{ds_id}/bins")
    def dataset_bins(
        ds_id: str,
        size_x: float | None = Query(default=None, gt=0),
        size_y: float | None = Query(default=None, gt=0),
        origin_x: float | None = Query(default=None),
        origin_y: float | None = Query(default=None),
    ):
        record = get_record(ds_id)
        layout = _resolve_layout(record.dataset, size_x, size_y, origin_x, origin_y)
        grid = bin_points(record.dataset, layout)
        return _json_response(_bins_payload(grid, {}))

    @app.get("/api/datasets/{ds_id}/blur")
    def dataset_blur(
        ds_id: str,
        sigma_x: float = Query(gt=0),
        sigma_y: float = Query(gt=0),
        epsilon: float = Query(default=1e-3, gt=0, lt=1),
        mode: Literal["center_relative", "mass_preserving"] = "mass_preserving",
        size_x: float | None = Query(default=None, gt=0),
        size_y: float | None = Query(default=None, gt=0),
        origin_x: float | None = Query(default=None),
        origin_y: float | None = Query(default=None),
    ):
        record = get_record(ds_id)
        layout = _resolve_layout(record.dataset, size_x, size_y, origin_x, origin_y)
        grid = bin_points(record.dataset, layout)
        params = BlurParams(sigma_x, sigma_y, epsilon, mode)
        blurred = apply_blur(grid, get_stencil(params), threads=_env_threads())
        return _json_response(_bins_payload(blurred, {
            "sigma_x": sigma_x, "sigma_y": sigma_y,
            "epsilon": epsilon, "mode": mode,
        }))

    @app.get("/api/datasets/{ds_id}/bins/{q}/{r}/labels")
    def bin_labels(
        ds_id: str,
        q: int,
        r: int,
        k: int = Query(default=10, ge=1),
        size_x: float | None = Query(default=None, gt=0),
        size_y: float | None = Query(default=None, gt=0),
        origin_x: float | None = Query(default=None),
        origin_y: float | None = Query(default=None),
    ):
        record = get_record(ds_id)
        layout = _resolve_layout(record.dataset, size_x, size_y, origin_x, origin_y)
        grid = bin_points(record.dataset, layout)
        ranked = top_labels(grid, AxialCoord(q, r), k)
        return _json_response([{"label": label, "weight": w} for label, w in ranked])

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def _env_threads() -> int:
    try:
        return max(1, int(os.environ.get("HEXBLUR_THREADS", "1")))
    except ValueError:
        return 1
