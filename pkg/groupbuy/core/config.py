from pydantic import BaseSettings


class Settings(BaseSettings):
    SENTRY_DSN: str | None
    LOG_LEVEL: str = "INFO"

    # Guards against exponential blowup in the SWM solvers
    MAX_PARTITIONS: int = 5_000_000
    MAX_ORACLE_ALLOCATIONS: int = 1_000_000

    JOBS: int = 1
    PROGRESS_EVERY: int = 10_000

    class Config:
        env_file = ".env"
        env_prefix = "GROUPBUY_"


settings = Settings()
