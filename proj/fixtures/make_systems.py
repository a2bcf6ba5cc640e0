#!/usr/bin/env python3
"""Regenerates system.json and system-reduced.json.

Campus-scale desk system: three carriers, two representative days of 24 hourly
slices (182.5 h each). Magnitudes are in MWh/MW; annual demand is
113 (electricity), 103 (heat), 30 (cooling).
"""
import json
import math
from pathlib import Path

HERE = Path(__file__).resolve().parent
DAYS = ["winter", "summer"]
WEIGHT = 182.5
N = 48


def hourly(fn):
    return [fn(d, h) for d in DAYS for h in range(24)]


def shaped(annual, day_share, hour_shape):
    raw = [day_share[d] * hour_shape(d, h) for d in DAYS for h in range(24)]
    s = sum(raw)
    vals = [round(annual * r / s, 6) for r in raw]
    vals[-1] = round(annual - sum(vals[:-1]), 6)
    return vals


def elec_shape(d, h):
    if h < 6:
        return 0.7
    return 1.2 if 8 <= h <= 18 else 1.0


def heat_shape(d, h):
    if h < 5:
        return 0.8
    if h <= 9:
        return 1.4
    return 1.1 if h <= 17 else 1.0


def cool_shape(d, h):
    return 1.5 if 10 <= h <= 18 else 0.6


def pv(d, h):
    lo, hi, peak = (8, 16, 0.35) if d == "winter" else (5, 21, 0.75)
    if h < lo or h > hi:
        return 0.0
    return round(peak * math.sin(math.pi * (h - lo + 0.5) / (hi - lo + 1)), 4)


def cop(winter, summer, swing):
    # colder nights lower the COP of air-source units a little
    return hourly(lambda d, h: round((winter if d == "winter" else summer) - (swing if h < 6 else 0.0), 3))


def free_cooling(d, h):
    if d == "winter":
        return 0.9
    return 0.3 if (h < 7 or h > 21) else 0.05


slices = [{"id": f"{d}-{h:02d}", "weight": WEIGHT} for d in DAYS for h in range(24)]
demand = {
    "electricity": shaped(113.0, {"winter": 0.52, "summer": 0.48}, elec_shape),
    "heat": shaped(103.0, {"winter": 0.78, "summer": 0.22}, heat_shape),
    "cooling": shaped(30.0, {"winter": 0.15, "summer": 0.85}, cool_shape),
}

T = {}
T["EP"] = dict(id="EP", name="grid electricity procurement", sector="electricity", procurement=True,
               costs=dict(fuel=180.0), emission_factor=0.38)
T["PV"] = dict(id="PV", name="photovoltaics", sector="electricity", max_investment=0.000875,
               costs=dict(invest=75000.0, fom=15000.0), availability=hourly(pv))
T["BioCHP"] = dict(id="BioCHP", name="biowaste CHP", sector="heat", outputs={"heat": 1.0, "electricity": 0.7},
                   existing_capacity=0.002, costs=dict(fom=9000.0, vom=10.0, fuel=45.0), emission_factor=0.02,
                   availability=0.9)
T["BM_boiler"] = dict(id="BM_boiler", name="biomethane boiler", sector="heat", existing_capacity=0.03,
                      costs=dict(fom=1500.0, vom=3.0, fuel=95.0), emission_factor=0.05)
T["Pellet"] = dict(id="Pellet", name="pellet boiler", sector="heat", max_investment=0.015,
                   costs=dict(invest=28000.0, fom=4000.0, vom=5.0, fuel=48.0), emission_factor=0.03)
T["LT_AWHP"] = dict(id="LT_AWHP", name="low-temperature air-water heat pump", sector="heat",
                    input={"carrier": "electricity", "cop": cop(3.0, 3.9, 0.3)}, max_investment=0.01,
                    costs=dict(invest=55000.0, fom=3000.0, vom=2.0))
T["HT_AWHP"] = dict(id="HT_AWHP", name="high-temperature air-water heat pump", sector="heat",
                    input={"carrier": "electricity", "cop": cop(2.3, 3.0, 0.2)}, max_investment=0.015,
                    costs=dict(invest=65000.0, fom=3500.0, vom=2.0))
T["DGE"] = dict(id="DGE", name="deep geothermal plant", sector="heat", max_investment=0.004,
                costs=dict(invest=160000.0, fom=20000.0, vom=4.0, aux=2.0), availability=0.95)
T["DC_waste_heat"] = dict(id="DC_waste_heat", name="data centre waste heat", sector="heat",
                          existing_capacity=0.0015,
                          note="variable cost is data-owner input; zero until priced")
T["GWHP"] = dict(id="GWHP", name="ground-water heat pumps", sector="heat",
                 input={"carrier": "electricity", "cop": cop(4.2, 4.8, 0.0)}, max_investment=0.012,
                 max_annual_generation=48.0, costs=dict(invest=50000.0, fom=2500.0, vom=1.0))
T["C_AWHP"] = dict(id="C_AWHP", name="air-water heat pump (cooling)", sector="cooling",
                   input={"carrier": "electricity", "cop": cop(4.5, 3.2, -0.3)}, max_investment=0.01,
                   costs=dict(invest=40000.0, fom=2000.0, vom=1.5))
T["CRM"] = dict(id="CRM", name="compression refrigeration machines", sector="cooling",
                input={"carrier": "electricity", "cop": cop(3.4, 2.8, -0.2)}, existing_capacity=0.01,
                costs=dict(fom=1200.0, vom=3.0))
T["Free_cooling"] = dict(id="Free_cooling", name="free cooling", sector="cooling",
                         input={"carrier": "electricity", "cop": 15.0}, existing_capacity=0.004,
                         costs=dict(vom=1.0), availability=hourly(free_cooling))

FULL = ["EP", "PV", "BioCHP", "BM_boiler", "Pellet", "LT_AWHP", "HT_AWHP", "DGE", "DC_waste_heat", "GWHP",
        "C_AWHP", "CRM", "Free_cooling"]
REDUCED = ["EP", "PV", "BioCHP", "BM_boiler", "Pellet", "DC_waste_heat", "CRM", "Free_cooling"]


def system(ids, description):
    return {
        "description": description,
        "hours_per_year": 8760,
        "procurement_factor": 3.0,
        "emission_cap": 80.0,
        "carriers": ["electricity", "heat", "cooling"],
        "slices": slices,
        "demand": demand,
        "technologies": [T[i] for i in ids],
    }


def dump(obj, name):
    (HERE / name).write_text(json.dumps(obj, indent=1) + "\n")


if __name__ == "__main__":
    dump(system(FULL, "Campus desk system, 13 technologies, 2 representative days x 24 h"), "system.json")
    dump(system(REDUCED, "Reduced desk system, 8 technologies with two investable options"),
         "system-reduced.json")
