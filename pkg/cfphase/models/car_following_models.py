from . import newell, idm, gipps
from .model_types import ModelId
from ..cf_state import as_eps
from ..settings import Settings
from ..utility.exceptions import UnsupportedModel

car_following_models = {
    ModelId.Newell: newell.newell_next,
    ModelId.BANewell: newell.ba_newell_next,
    ModelId.BDANewell: newell.bda_newell_next,
    ModelId.IDM: idm.idm_next,
    ModelId.GippsFull: gipps.gipps_full_next,
    ModelId.GippsSimplified: gipps.gipps_simplified_next,
}


def get_model(model_id):
    if model_id not in car_following_models:
        raise UnsupportedModel(model_id, "simulation")
    return car_following_models[model_id]


def model_next(model_id, p, params, eps):
    return get_model(model_id)(p, params, as_eps(eps))


def default_step_size(model_id):
    if model_id == ModelId.GippsFull:
        return 2.0 / 3.0
    return Settings().get_double("cfphase.sim.default_step")
