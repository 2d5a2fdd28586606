import logging
import os

import numpy as np

from ..compensator.certificate import build_certificate
from ..config import Config
from ..dc.builtins import load_function
from ..sets.scene import load_scene
from ..utils.logger import logger
from ..verify.reports import suite_document
from ..verify.sampling import grid
from ..verify.suites import run_suite
from .output import evaluate_grid, write_csv, write_json
from .parser import DEFAULT_BOUNDS, RunConfig


class Runner:
    def __init__(self, config: RunConfig):
        self.config = config
        if Config.DEBUG_LOGGING:
            logger.setLevel(logging.DEBUG)

    def run(self) -> int:
        logger.info(f"dcdist {self.config.subcommand}")
        handlers = {
            "decompose": self.decompose,
            "field": self.field,
            "verify": self.verify,
            "scenes": self.scenes,
        }
        return handlers[self.config.subcommand]()

    def decompose(self) -> int:
        f = load_function(self.config.fn)
        cert = build_certificate(f, self.config.n)
        cx, cy = cert.center
        r = cert.radius
        points = grid((cx - r, cx + r, cy - r, cy + r), self.config.grid)
        points = points[cert.contains(points, slack=0.0)]

        def fields(p):
            parts = cert.components(p)
            return np.column_stack([parts["d_n"], parts["c_n"], parts["c_star"]])

        if points.shape[0] == 0:
            logger.warning(f"No grid point of resolution {self.config.grid} lies in U; writing an empty certificate grid")
            values = np.empty((0, 3))
        else:
            values = evaluate_grid(fields, points, Config.THREADS).reshape(-1, 3)
        out_dir = self.config.output_dir()
        write_csv(os.path.join(out_dir, "certificate.csv"), ["x", "y", "d_n", "c_n", "c_star"], np.column_stack([points, values]))
        manifest = cert.manifest()
        manifest.update({"grid": self.config.grid, "points": int(points.shape[0]), "files": ["certificate.csv"]})
        write_json(os.path.join(out_dir, "manifest.json"), manifest)
        logger.info(f"Certificate for {f.name}: L={cert.L:.6g}, M={cert.M:.6g}, L*={cert.L_star:.6g}")
        return 0

    def field(self) -> int:
        scene = load_scene(self.config.scene)
        bounds = self.config.bounds or DEFAULT_BOUNDS
        points = grid(bounds, self.config.grid)
        d = evaluate_grid(scene.distances, points, Config.THREADS)
        write_csv(self.config.output_path("field.csv"), ["x", "y", "d"], np.column_stack([points, d]))
        return 0

    def verify(self) -> int:
        reports = run_suite(self.config.suite, self.config.seed, self.config.samples, self.config.tol)
        document = suite_document(self.config.suite, self.config.seed, reports)
        write_json(self.config.output_path("report.json"), document)
        failed = [r.name for r in reports if not r.passed]
        if failed:
            logger.error(f"Verification failed: {len(failed)} of {len(reports)} checks ({', '.join(failed)})")
            return 1
        logger.info(f"Verification passed: {len(reports)} checks")
        return 0

    def scenes(self) -> int:
        for name, description in Config.GALLERY_DESCRIPTIONS.items():
            print(f"{name}\t{description}")
        if self.config.out is not None:
            listing = [{"name": k, "description": v} for k, v in Config.GALLERY_DESCRIPTIONS.items()]
            write_json(self.config.out, {"scenes": listing})
        return 0
