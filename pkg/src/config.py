"""
Configuration Module
Contains all tunable bounds for the category-theory engine and its experiments
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Configuration class for the Serre quotient lab"""

    # Roof search / Serre saturation depth
    DEFAULT_DEPTH = int(os.getenv("CATLAB_DEFAULT_DEPTH", 2))

    # Zigzag enumeration in C[Σ⁻¹]
    WORD_LENGTH_BOUND = int(os.getenv("CATLAB_WORD_LENGTH_BOUND", 8))

    # Brute-force guardrails for the Ext¹ experiment
    EXT1_MAX_N = int(os.getenv("CATLAB_EXT1_MAX_N", 6))  # at p = 2
    EXT1_MAX_CLASSES = int(os.getenv("CATLAB_EXT1_MAX_CLASSES", 4096))

    # Serre membership search
    SATURATION_LIMIT = int(os.getenv("CATLAB_SATURATION_LIMIT", 24))
    ISO_SEARCH_LIMIT = int(os.getenv("CATLAB_ISO_SEARCH_LIMIT", 81))

    # Additive hulls over categories with at most this many objects
    # check their composition laws on construction
    AXIOM_CHECK_MAX_OBJECTS = int(os.getenv("CATLAB_AXIOM_CHECK_MAX_OBJECTS", 6))

    LOG_LEVEL = os.getenv("CATLAB_LOG_LEVEL", "WARNING")

    # Columns of the growth table
    GROWTH_COLUMNS = ["n", "pre_quotient_rank", "localised_hom_count", "quotient_rank"]

    @classmethod
    def validate(cls):
        """Validate configured bounds"""
        for name in (
            "DEFAULT_DEPTH",
            "WORD_LENGTH_BOUND",
            "EXT1_MAX_N",
            "EXT1_MAX_CLASSES",
            "SATURATION_LIMIT",
            "ISO_SEARCH_LIMIT",
        ):
            if getattr(cls, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(cls, name)}")
        return True
