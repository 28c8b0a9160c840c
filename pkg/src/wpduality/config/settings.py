import os
from dotenv import load_dotenv

load_dotenv()

class Settings:
    """Application configuration settings."""
    
    # Application Configuration
    DEBUG: bool = os.getenv('DEBUG', 'False').lower() == 'true'
    
    # Run Configuration
    DEFAULT_SEED: int = int(os.getenv('WPD_SEED', '20240917'))
    DEFAULT_SAMPLES: int = int(os.getenv('WPD_SAMPLES', '1000'))
    DEFAULT_LOG_BASE: str = os.getenv('WPD_LOG_BASE', '2')
    WORKERS: int = int(os.getenv('WPD_WORKERS', '1'))
    WITNESS_CAP: int = int(os.getenv('WPD_WITNESS_CAP', '10'))
    
    # Numerical Tolerances
    TOL: float = float(os.getenv('WPD_TOL', '1e-9'))
    SAT_TOL: float = float(os.getenv('WPD_SAT_TOL', '1e-9'))
    RANK_TOL: float = float(os.getenv('WPD_RANK_TOL', '1e-10'))
    HERMITICITY_TOL: float = float(os.getenv('WPD_HERMITICITY_TOL', '1e-10'))
    PSD_TOL: float = float(os.getenv('WPD_PSD_TOL', '1e-10'))
    TRACE_TOL: float = 1e-10
    NORM_TOL: float = 1e-12
    CPTP_TOL: float = 1e-10
    
    # Logging Configuration
    LOG_LEVEL: str = os.getenv('LOG_LEVEL', 'WARNING')
    LOG_FILE: str = os.getenv('LOG_FILE', '')
    
    @classmethod
    def validate_config(cls) -> bool:
        """Validate that the numeric configuration is usable."""
        tolerances = [cls.TOL, cls.SAT_TOL, cls.RANK_TOL, cls.HERMITICITY_TOL, cls.PSD_TOL]
        if any(t <= 0 for t in tolerances):
            return False
        if cls.RANK_TOL >= 1:
            return False
        if cls.WITNESS_CAP < 0 or cls.WORKERS < 1 or cls.DEFAULT_SAMPLES < 1:
            return False
        if cls.DEFAULT_LOG_BASE not in ('2', 'e'):
            return False
        return True

# Global settings instance
settings = Settings()
