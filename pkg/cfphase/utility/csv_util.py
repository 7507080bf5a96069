import csv
import math

from ..settings import Settings


def format_float(value, digits=None):
    if digits is None:
        digits = Settings().get_integer("cfphase.csv.significant_digits")
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # drop the sign of -0.0
    return "%.*g" % (digits, value)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fout:
        writer = csv.writer(fout, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def read_csv(path):
    with open(path, "r", newline="") as fin:
        reader = csv.reader(fin)
        header = next(reader)
        return header, [row for row in reader]
