from .model_types import ModelId, ModelOutput, NEWELL_FAMILY, GIPPS_FAMILY
from .car_following_models import (
    car_following_models,
    model_next,
    default_step_size
)
