import json
import os

from .utility.exceptions import ConfigError

_TYPES = {
    "number": (int, float),
    "string": (str,),
    "boolean": (bool,),
}


class Settings(object):
    # process-wide registry; every instance shares it
    _groups = dict()
    _schemas = dict()
    _values = dict()

    def __str__(self):
        return "<Settings %d registered, %d overridden>" % \
            (len(self._schemas), len(self._values))

    def __repr__(self):
        return self.__str__()

    def register_group(self, group, title):
        self._groups[group] = title

    def register_setting(self, key, properties):
        schema = json.loads(properties)
        group = key.split(".")[0]
        if group not in self._groups:
            raise ConfigError("unregistered settings group", key)
        for field in ("title", "type", "default", "description"):
            if field not in schema:
                raise ConfigError("missing schema field '%s'" % field, key)
        self._schemas[key] = schema

    def contains(self, key):
        return key in self._schemas

    def keys(self):
        return sorted(self._schemas.keys())

    def schema(self, key):
        if key not in self._schemas:
            raise ConfigError("unknown setting", key)
        return self._schemas[key]

    def _check(self, key, value):
        schema = self.schema(key)
        expected = _TYPES[schema["type"]]
        if isinstance(value, bool) and schema["type"] == "number":
            raise ConfigError("expected a number", key)
        if not isinstance(value, expected):
            raise ConfigError("expected a %s" % schema["type"], key)
        if "enum" in schema and value not in schema["enum"]:
            raise ConfigError(
                "value %r not in %s" % (value, schema["enum"]), key)

    def set(self, key, value):
        self._check(key, value)
        self._values[key] = value

    def reset(self, key=None):
        if key is None:
            self._values.clear()
        else:
            self._values.pop(key, None)

    def get(self, key):
        if key in self._values:
            return self._values[key]
        return self.schema(key)["default"]

    def get_double(self, key):
        return float(self.get(key))

    def get_integer(self, key):
        return int(self.get(key))

    def get_string(self, key):
        return str(self.get(key))

    def get_bool(self, key):
        return bool(self.get(key))

    def snapshot(self):
        return dict(self._values)

    def restore(self, values):
        self._values.clear()
        for key in values:
            self.set(key, values[key])

    def load_overrides(self, path):
        try:
            with open(path, "r") as fin:
                data = json.load(fin)
        except (OSError, ValueError) as e:
            raise ConfigError("cannot read settings file: %s" % e, path)
        if not isinstance(data, dict):
            raise ConfigError("settings file must hold an object", path)
        for key in data:
            full_key = key if key.startswith("cfphase.") else "cfphase." + key
            self.set(full_key, data[key])


def get_setting(name):
    return Settings().get("cfphase." + name)


Settings().register_group("cfphase", "cfphase")
Settings().register_setting("cfphase.tolerance.length", """
    {
        "title" : "Length tolerance",
        "type" : "number",
        "default" : 1e-9,
        "description" : "Absolute tolerance (m) used when classifying spacings against jam spacings."
    }
    """)
Settings().register_setting("cfphase.tolerance.speed", """
    {
        "title" : "Speed tolerance",
        "type" : "number",
        "default" : 1e-9,
        "description" : "Absolute tolerance (m/s) for forward traveling, speed limit and time gap checks."
    }
    """)
Settings().register_setting("cfphase.tolerance.accel", """
    {
        "title" : "Acceleration tolerance",
        "type" : "number",
        "default" : 1e-9,
        "description" : "Absolute tolerance (m/s^2) for bounded control checks."
    }
    """)
Settings().register_setting("cfphase.audit.onset_accel_threshold", """
    {
        "title" : "Braking onset threshold",
        "type" : "number",
        "default" : 0.0,
        "description" : "Braking starts when the commanded acceleration drops below minus this value (m/s^2)."
    }
    """)
Settings().register_setting("cfphase.audit.onset_min_duration", """
    {
        "title" : "Braking onset duration",
        "type" : "number",
        "default" : 0.5,
        "description" : "Time (s) the deceleration has to be sustained to count as braking onset."
    }
    """)
Settings().register_setting("cfphase.audit.ssd_factor", """
    {
        "title" : "Safe stopping distance factor",
        "type" : "number",
        "default" : 1.5,
        "description" : "Braking onset spacing may exceed the safe stopping distance by at most this factor."
    }
    """)
Settings().register_setting("cfphase.models.step_precondition", """
    {
        "title" : "Step size precondition policy",
        "type" : "string",
        "default" : "error",
        "description" : "What to do when a Newell-family model runs with a step larger than the minimum time gap.",
        "enum": ["error", "warning"]
    }
    """)
Settings().register_setting("cfphase.sim.default_step", """
    {
        "title" : "Default step size",
        "type" : "number",
        "default" : 0.001,
        "description" : "Step size (s) used when a scenario does not set one."
    }
    """)
Settings().register_setting("cfphase.sim.clamp_policy", """
    {
        "title" : "Default clamp policy",
        "type" : "string",
        "default" : "none",
        "description" : "Default speed clamp policy of new scenarios.",
        "enum": ["none", "stop-at-zero-speed"]
    }
    """)
Settings().register_setting("cfphase.csv.significant_digits", """
    {
        "title" : "CSV significant digits",
        "type" : "number",
        "default" : 9,
        "description" : "Significant digits of floats written to CSV files."
    }
    """)
Settings().register_setting("cfphase.harness.jobs", """
    {
        "title" : "Sweep workers",
        "type" : "number",
        "default" : 1,
        "description" : "Number of worker processes evaluating sweep cells."
    }
    """)
Settings().register_setting("cfphase.harness.beta_xtol", """
    {
        "title" : "Beta search tolerance",
        "type" : "number",
        "default" : 1e-3,
        "description" : "Bracket width (m/s^2) at which the deceleration bound search stops."
    }
    """)
Settings().register_setting("cfphase.harness.beta_maxiter", """
    {
        "title" : "Beta search iterations",
        "type" : "number",
        "default" : 40,
        "description" : "Maximum number of bisection steps of the deceleration bound search."
    }
    """)
Settings().register_setting("cfphase.fd.step", """
    {
        "title" : "Fundamental diagram step size",
        "type" : "number",
        "default" : 0.1,
        "description" : "Step size (s) of the platoon runs measuring steady states."
    }
    """)
Settings().register_setting("cfphase.fd.run_time", """
    {
        "title" : "Fundamental diagram run time",
        "type" : "number",
        "default" : 30,
        "description" : "Simulated time (s) of the platoon runs measuring steady states."
    }
    """)
Settings().register_setting("cfphase.fd.window", """
    {
        "title" : "Fundamental diagram window",
        "type" : "number",
        "default" : 5,
        "description" : "Final window (s) over which steady speeds are measured."
    }
    """)
Settings().register_setting("cfphase.fd.steady_tolerance", """
    {
        "title" : "Steady state tolerance",
        "type" : "number",
        "default" : 1e-6,
        "description" : "Maximum speed spread (m/s) in the measurement window for a steady state."
    }
    """)
Settings().register_setting("cfphase.report.timestamp", """
    {
        "title" : "Report timestamp",
        "type" : "boolean",
        "default" : true,
        "description" : "Write a generation timestamp into report metadata."
    }
    """)

if os.environ.get("CFPHASE_SETTINGS"):
    Settings().load_overrides(os.environ["CFPHASE_SETTINGS"])
