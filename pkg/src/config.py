import os
from dotenv import load_dotenv

load_dotenv()

class Config:
    THREADS = int(os.getenv("DCDIST_THREADS", str(os.cpu_count() or 1)))
    DEBUG_LOGGING = os.getenv("DEBUG_LOGGING", "FALSE").upper() == "TRUE"
    SEED = int(os.getenv("DCDIST_SEED", "7"))
    IDENTITY_TOL = float(os.getenv("DCDIST_IDENTITY_TOL", "1e-9"))
    DERIVATIVE_TOL = float(os.getenv("DCDIST_DERIVATIVE_TOL", "1e-6"))
    LIPSCHITZ_SLACK = float(os.getenv("DCDIST_LIPSCHITZ_SLACK", "1e-6"))
    GRAPH_TOL = float(os.getenv("DCDIST_GRAPH_TOL", "1e-9"))
    OUTPUT_DIR = os.getenv("DCDIST_OUTPUT_DIR", "out")

    # Certificate neighbourhood U((0, f(0)), 1/10) and interpolation window [-1, 1].
    CERTIFICATE_RADIUS = 0.1
    CERTIFICATE_WINDOW = (-1.0, 1.0)
    MIN_RESOLUTION = 6

    GALLERY_DESCRIPTIONS = {
        "osc-intersection-A": "upper half-plane {y >= 0}, epigraph of f = 0",
        "osc-intersection-B": "hypograph of g(x) = x^5 cos(pi/x) over [-1, 1]",
        "osc-M": "M = A ∩ B, a finite truncation of {0 <= y <= g(x)}; d_M is not DC",
        "osc-K": "K = closure of the complement of M = {y <= 0} ∪ {y >= g(x)} ∪ {|x| >= 1}",
        "nowhere-dense-A": "graphs of ±max(x^5, 0) and of g on [1/(2k+1), 1/(2k)], k <= k_max",
        "d1-counterexample": "{1/k : k <= K} ∪ {0} on the line; components not locally finite",
        "d1-finite": "[0, 1] ∪ {2} ∪ [3, 4] on the line; components locally finite",
        "osc-zero-set": "H = {x : 0 <= x^5 cos(pi/x)} on the line, truncated, limit point 0",
        "semiconcave-graph": "graph of the semiconcave function x^2 - |x| over [-1, 1]",
    }
