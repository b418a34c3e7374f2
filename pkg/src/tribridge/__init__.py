"""Three-player auction-bridge variant: engine, strategy lab, simulation harness."""

__version__ = "0.1.0"
