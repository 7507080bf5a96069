from .labels import PhaseLabel, RegionLabel, region_of
