"""Runtime configuration read from the environment."""

import os
from pydantic import BaseModel, Field
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Settings(BaseModel):
    """Tunable limits for certified computations."""

    precision: int = Field(128, ge=64, description="Starting working precision in bits")
    precision_cap: int = Field(2 ** 15, ge=64, description="Hard cap of the precision ladder")
    node_cap: int = Field(10 ** 8, gt=0, description="Enumeration node budget")
    sieve_primes: int = Field(25, gt=0, description="Primes used by the irreducibility sieve")
    log_level: str = Field("INFO", description="Default log level")

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from NF_* environment variables."""
        return cls(
            precision=int(os.getenv("NF_PRECISION", "128")),
            precision_cap=int(os.getenv("NF_PRECISION_CAP", str(2 ** 15))),
            node_cap=int(os.getenv("NF_NODE_CAP", str(10 ** 8))),
            sieve_primes=int(os.getenv("NF_SIEVE_PRIMES", "25")),
            log_level=os.getenv("LOG_LEVEL", "INFO"),
        )


settings = Settings.from_env()
