#!/usr/bin/env python3
"""Regenerates catalog.json, the synthetic attribute catalog for the desk system.

All coefficients are invented but internally consistent (heat pumps inherit a
share of grid electricity's primary energy and volatility, biomass carries the
land use and the truck traffic). Every entry is tagged "synthetic".
"""
import json
from pathlib import Path

HERE = Path(__file__).resolve().parent
TECHS = ["EP", "PV", "BioCHP", "BM_boiler", "Pellet", "LT_AWHP", "HT_AWHP", "DGE", "DC_waste_heat", "GWHP",
         "C_AWHP", "CRM", "Free_cooling"]

NORMAL = {"model": "normal-relative", "sd": 0.1, "envelope_sd": 2.0}
UNIFORM = {"model": "uniform-support"}
SCALE = [1, 7]

attributes = [
    dict(id="om_cost", name="Annual O&M costs", unit="EUR/a", objective="economic", direction="lower-better",
         basis="generation", aggregation="model-direct", component="operating", uncertainty=NORMAL),
    dict(id="invest_cost", name="Annual investment costs", unit="EUR/a", objective="economic",
         direction="lower-better", basis="capacity", aggregation="model-direct", component="investment",
         uncertainty=NORMAL),
    dict(id="fte", name="Full-time equivalents for operation", unit="FTE", objective="economic",
         direction="lower-better", basis="capacity", aggregation="sum", uncertainty=NORMAL),
    dict(id="pef", name="Primary energy factor of supply", unit="-", objective="environment",
         direction="lower-better", basis="generation", aggregation="demand-weighted-mean", uncertainty=NORMAL),
    dict(id="land_use", name="Land-use factor", unit="-", objective="environment", direction="lower-better",
         basis="generation", aggregation="demand-weighted-mean", uncertainty=NORMAL),
    dict(id="price_volatility", name="Weighted price volatility exposure", unit="%", objective="security",
         direction="lower-better", basis="generation", aggregation="demand-weighted-mean", uncertainty=NORMAL),
    dict(id="shannon", name="Shannon index of generation", unit="-", objective="security",
         direction="higher-better", basis="systemic", aggregation="shannon", decomposable=False),
    dict(id="regulatory_burden", name="Regulatory burden score", unit="1-7", objective="feasibility",
         direction="lower-better", basis="capacity", aggregation="capacity-weighted-mean", scale=SCALE,
         uncertainty=UNIFORM),
    dict(id="technical_burden", name="Technical burden score", unit="1-7", objective="feasibility",
         direction="lower-better", basis="capacity", aggregation="capacity-weighted-mean", scale=SCALE,
         uncertainty=UNIFORM),
    dict(id="campus_area", name="Campus area requirement score", unit="1-7", objective="campus",
         direction="lower-better", basis="capacity", aggregation="capacity-weighted-mean", scale=SCALE,
         uncertainty=UNIFORM),
    dict(id="transport_frequency", name="Resource transport frequency", unit="trucks/a", objective="campus",
         direction="lower-better", basis="generation", aggregation="sum", uncertainty=NORMAL),
]


def row(values):
    return {t: v for t, v in zip(TECHS, values)}


#                 EP    PV   CHP   BM   Pel   LT   HT   DGE  DC   GWHP CAW  CRM  Free
coefficients = {
    "fte":        row([0.0, 2.0, 40.0, 8.0, 25.0, 5.0, 6.0, 60.0, 4.0, 10.0, 4.0, 5.0, 2.0]),
    "pef":        row([1.8, 0.0, 0.3, 1.5, 0.2, 0.6, 0.8, 0.15, 0.0, 0.4, 0.55, 0.65, 0.12]),
    "land_use":   row([0.3, 0.8, 2.5, 1.8, 3.0, 0.1, 0.1, 0.05, 0.0, 0.1, 0.05, 0.05, 0.02]),
    "price_volatility": row([35.0, 0.0, 10.0, 30.0, 15.0, 12.0, 14.0, 2.0, 0.0, 8.0, 10.0, 12.0, 2.0]),
    "transport_frequency": row([0.0, 0.0, 0.08, 0.0, 0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
}

expert_ranges = {
    "regulatory_burden": row([[1, 2], [2, 3], [4, 6], [2, 3], [3, 5], [2, 3], [2, 4], [5, 7], [2, 4], [4, 6],
                              [1, 3], [1, 2], [1, 2]]),
    "technical_burden":  row([[1, 1], [2, 3], [4, 5], [1, 2], [3, 4], [2, 3], [3, 4], [5, 7], [3, 5], [4, 5],
                              [2, 3], [1, 2], [2, 3]]),
    "campus_area":       row([[1, 1], [3, 5], [3, 4], [1, 2], [4, 6], [3, 4], [3, 4], [2, 4], [1, 2], [5, 7],
                              [2, 4], [1, 2], [2, 3]]),
}

catalog = {
    "description": "Synthetic attribute catalog for the 13-technology desk system",
    "provenance": "synthetic",
    "attributes": attributes,
    "coefficients": coefficients,
    "expert_ranges": expert_ranges,
}

if __name__ == "__main__":
    (HERE / "catalog.json").write_text(json.dumps(catalog, indent=1) + "\n")
