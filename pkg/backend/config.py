from decouple import config


def _optional_float(value):
    if value in (None, ''):
        return None
    return float(value)


class Settings:
    """Runtime settings; every attribute is re-read from the environment on access."""

    @property
    def precision_override(self):
        return config('CORRCALC_PRECISION', default='', cast=_optional_float)

    @property
    def algebra_tolerance(self) -> float:
        override = self.precision_override
        if override is not None:
            return override
        return config('CORRCALC_ALGEBRA_TOL', default=1e-9, cast=float)

    @property
    def diagonal_tolerance(self) -> float:
        override = self.precision_override
        if override is not None:
            return override
        return config('CORRCALC_DIAGONAL_TOL', default=1e-12, cast=float)

    @property
    def search_cap(self) -> int:
        return config('CORRCALC_SEARCH_CAP', default=1000, cast=int)

    @property
    def search_workers(self) -> int:
        return config('CORRCALC_SEARCH_WORKERS', default=2, cast=int)

    @property
    def float_digits(self) -> int:
        return config('CORRCALC_FLOAT_DIGITS', default=12, cast=int)

    @property
    def log_level(self) -> str:
        return config('CORRCALC_LOG_LEVEL', default='WARNING').upper()


settings = Settings()
