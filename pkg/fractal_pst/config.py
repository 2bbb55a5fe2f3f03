import os
from pydantic import BaseModel
from dotenv import load_dotenv, find_dotenv

# Load .env as early as possible and search upwards for robustness
load_dotenv(find_dotenv(), override=False)


class Settings(BaseModel):
    threads: int = int(os.environ.get("FRACTAL_PST_THREADS", "1"))
    pst_tol: float = float(os.environ.get("FRACTAL_PST_TOL", "1e-8"))
    max_odd: int = int(os.environ.get("FRACTAL_PST_MAX_ODD", "99"))
    fidelity_threshold: float = float(os.environ.get("FRACTAL_PST_FIDELITY_THRESHOLD", "1e-8"))
    seed: int = int(os.environ.get("FRACTAL_PST_SEED", "0"))
    log_level: str = os.environ.get("FRACTAL_PST_LOG_LEVEL", "INFO")


settings = Settings()
