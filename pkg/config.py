import os


def _int_env(name, default):
    raw = os.environ.get(name, str(default)).strip()
    try:
        return int(raw)
    except ValueError:
        raise RuntimeError(f"ERROR: {name} must be an integer, got {raw!r}.")


class Config:
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING")

    GUARD_LIMIT = _int_env("LAPCODE_GUARD_LIMIT", 10_000_000)
    if GUARD_LIMIT < 1:
        raise RuntimeError("ERROR: LAPCODE_GUARD_LIMIT must be positive.")

    WORKERS = _int_env("LAPCODE_WORKERS", 1)
    CACHE_CODEWORDS = _int_env("LAPCODE_CACHE_CODEWORDS", 200_000)
    PROGRESS = os.environ.get("LAPCODE_PROGRESS", "false").lower() == "true"

    APP_VERSION = os.environ.get("VERSION", "dev")

    # Derived guards follow GUARD_LIMIT at call time.
    @classmethod
    def oracle_limit(cls):
        return max(cls.GUARD_LIMIT // 100, 1)

    @classmethod
    def dual_limit(cls):
        return max(cls.GUARD_LIMIT // 10, 1)

    @classmethod
    def box_limit(cls):
        return cls.GUARD_LIMIT

    @classmethod
    def witness_limit(cls):
        return max(cls.GUARD_LIMIT // 10, 1)
