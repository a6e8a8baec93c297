import os
from dataclasses import dataclass
from dotenv import load_dotenv


load_dotenv()

_FORMATS = {"csv", "json"}


@dataclass(frozen=True)
class Settings:
    seed: int = 20240601
    threads: int = 1
    out_dir: str = "runs"
    log_path: str = "logs/mfscan.log"
    output_format: str = "csv"
    bits: int = 16
    poly_order: int = 5


def _int_env(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}.")
    if value < minimum:
        raise RuntimeError(f"{name} must be >= {minimum}, got {value}.")
    return value


def get_settings() -> Settings:
    seed = _int_env("MFSCAN_SEED", Settings.seed)
    if seed >= 2**64:
        raise RuntimeError("MFSCAN_SEED must fit in an unsigned 64-bit integer.")
    threads = _int_env("MFSCAN_THREADS", Settings.threads, minimum=1)
    bits = _int_env("MFSCAN_BITS", Settings.bits, minimum=4)
    if bits > 31:
        raise RuntimeError(f"MFSCAN_BITS must be within 4..31, got {bits}.")
    poly_order = _int_env("MFSCAN_POLY_ORDER", Settings.poly_order)

    fmt = (os.getenv("MFSCAN_FORMAT") or Settings.output_format).strip().lower()
    if fmt not in _FORMATS:
        raise RuntimeError(
            f"MFSCAN_FORMAT must be one of {sorted(_FORMATS)}. Set it in .env or export the variable."
        )

    return Settings(
        seed=seed,
        threads=threads,
        out_dir=os.getenv("MFSCAN_OUT_DIR") or Settings.out_dir,
        log_path=os.getenv("MFSCAN_LOG_PATH") or Settings.log_path,
        output_format=fmt,
        bits=bits,
        poly_order=poly_order,
    )
