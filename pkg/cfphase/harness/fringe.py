SIMULATED = "simulated"
TRUNCATED = "truncated"
DOMAIN_EXCLUDED = "domain-excluded"
NON_COMPLIANT = "non-compliant"

STATUSES = (SIMULATED, TRUNCATED, DOMAIN_EXCLUDED, NON_COMPLIANT)


class Fringe(object):
    def __init__(self):
        self.simulated = list()
        self.truncated = list()
        self.excluded = list()
        self.non_compliant = list()
        self.last_added = None

    def __str__(self):
        return "<Fringe id: 0x%x, simulated: %d, truncated: %d, excluded: %d, non-compliant: %d>" % (
            id(self), len(self.simulated), len(self.truncated),
            len(self.excluded), len(self.non_compliant)
        )

    def __repr__(self):
        return self.__str__()

    @property
    def num_cells(self):
        return len(self.simulated) + len(self.truncated) + \
            len(self.excluded) + len(self.non_compliant)

    @property
    def audited(self):
        # cells with a trajectory behind them
        return sorted(self.simulated + self.truncated, key=lambda c: c.index)

    def cells(self):
        return sorted(self.simulated + self.truncated + self.excluded + self.non_compliant,
                      key=lambda c: c.index)

    def counts(self):
        return {
            SIMULATED: len(self.simulated),
            TRUNCATED: len(self.truncated),
            DOMAIN_EXCLUDED: len(self.excluded),
            NON_COMPLIANT: len(self.non_compliant),
        }

    def add(self, cell):
        self.last_added = cell
        if cell.status == SIMULATED:
            self.simulated.append(cell)
        elif cell.status == TRUNCATED:
            self.truncated.append(cell)
        elif cell.status == DOMAIN_EXCLUDED:
            self.excluded.append(cell)
        elif cell.status == NON_COMPLIANT:
            self.non_compliant.append(cell)
        else:
            raise ValueError("unknown cell status %s" % cell.status)
