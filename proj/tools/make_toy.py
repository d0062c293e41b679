#!/usr/bin/env python3
"""Writes the bundled toy datasets (48 h and 336 h) under examples/.

Costs follow ATB 2022 moderate values; demand and
renewable traces are synthetic and seeded, so reruns give identical files.
"""
import argparse
import json
import math
import random
from pathlib import Path

GAS = 2.8
CO2 = 0.05306  # t/MMBtu, natural gas

COLUMNS = [
    "name", "class", "existing_mw", "can_expand", "can_retire", "max_mw", "unit_mw",
    "capex_usd_per_kw", "capex_usd_per_kwh", "fom_usd_per_kw_yr", "fom_usd_per_kwh_yr",
    "vom_usd_per_mwh", "heat_rate_mmbtu_per_mwh", "fuel_usd_per_mmbtu", "co2_t_per_mmbtu",
    "capture_rate", "ces_qualifying", "ptc_usd_per_mwh", "itc_fraction", "lifetime_yr",
    "existing_mwh", "eff_charge", "eff_discharge", "max_duration_h",
    "min_load", "ramp_rate", "min_up_h", "min_down_h", "startup_usd_per_mw",
    "startup_fuel_mmbtu_per_mw",
]


def resources():
    rows = [
        dict(name="nuclear", **{"class": "firm"}, existing_mw=800, can_retire="true",
             capex_usd_per_kw=4388, fom_usd_per_kw_yr=146, vom_usd_per_mwh=3,
             heat_rate_mmbtu_per_mwh=10.45, fuel_usd_per_mmbtu=0.7, ces_qualifying="true"),
        dict(name="ccgt", **{"class": "thermal-uc"}, existing_mw=1500, can_retire="true",
             unit_mw=500, max_mw=2500,
             capex_usd_per_kw=920, fom_usd_per_kw_yr=28, vom_usd_per_mwh=2,
             heat_rate_mmbtu_per_mwh=6.4, fuel_usd_per_mmbtu=GAS, co2_t_per_mmbtu=CO2,
             min_load=0.4, ramp_rate=0.6, min_up_h=4, min_down_h=4, startup_usd_per_mw=61,
             startup_fuel_mmbtu_per_mw=2.0),
        dict(name="ct", **{"class": "thermal-simple"}, existing_mw=600, can_expand="true",
             can_retire="true", capex_usd_per_kw=793, fom_usd_per_kw_yr=21, vom_usd_per_mwh=5,
             heat_rate_mmbtu_per_mwh=9.7, fuel_usd_per_mmbtu=GAS, co2_t_per_mmbtu=CO2),
        dict(name="ct_old", **{"class": "thermal-simple"}, existing_mw=1000,
             fom_usd_per_kw_yr=21, vom_usd_per_mwh=5, heat_rate_mmbtu_per_mwh=11.5,
             fuel_usd_per_mmbtu=GAS, co2_t_per_mmbtu=CO2),
        dict(name="ccgt_ccs", **{"class": "thermal-uc"}, existing_mw=0, unit_mw=500, max_mw=3000,
             capex_usd_per_kw=2310, fom_usd_per_kw_yr=67, vom_usd_per_mwh=10,
             heat_rate_mmbtu_per_mwh=7.124, fuel_usd_per_mmbtu=GAS, co2_t_per_mmbtu=CO2,
             capture_rate=0.9, ces_qualifying="true",
             min_load=0.7, ramp_rate=0.36, min_up_h=12, min_down_h=18, startup_usd_per_mw=159,
             startup_fuel_mmbtu_per_mw=2.0),
        dict(name="battery", **{"class": "storage"}, existing_mw=0, can_expand="true",
             capex_usd_per_kw=159, capex_usd_per_kwh=114, fom_usd_per_kw_yr=6,
             fom_usd_per_kwh_yr=5, existing_mwh=0, eff_charge=0.92, eff_discharge=0.92,
             max_duration_h=8, lifetime_yr=15, max_mw=300),
        dict(name="wind", **{"class": "vre"}, existing_mw=2000, can_expand="true", max_mw=9000,
             capex_usd_per_kw=1053, fom_usd_per_kw_yr=39, ces_qualifying="true"),
        dict(name="wind_coastal", **{"class": "vre"}, existing_mw=500, can_expand="true",
             max_mw=3000, capex_usd_per_kw=1053, fom_usd_per_kw_yr=39, ces_qualifying="true"),
        dict(name="solar", **{"class": "vre"}, existing_mw=2000, can_expand="true", max_mw=3000,
             capex_usd_per_kw=845, fom_usd_per_kw_yr=16, ces_qualifying="true"),
        dict(name="offshore_wind", **{"class": "vre"}, existing_mw=0, can_expand="true",
             max_mw=2000, capex_usd_per_kw=1722, fom_usd_per_kw_yr=89, ces_qualifying="true"),
    ]
    out = []
    for r in rows:
        out.append([str(r.get(c, "")) for c in COLUMNS])
    return out


def traces(hours, seed):
    rng = random.Random(seed)
    demand, wind, coastal, solar, offshore = [], [], [], [], []
    w = 0.45
    c = 0.4
    o = 0.5
    for h in range(hours):
        hod = h % 24
        day = h // 24
        weekend = day % 7 in (5, 6)
        shape = 0.5 * (1 - math.cos(2 * math.pi * (hod - 5) / 24))
        load = 3300 + 1500 * shape - (250 if weekend else 0) + rng.gauss(0, 60)
        demand.append(round(load, 1))
        # persistent weather with a night-time lift for inland wind
        w = min(0.95, max(0.02, 0.85 * w + 0.15 * (0.4 + 0.25 * math.cos(2 * math.pi * hod / 24))
                          + rng.gauss(0, 0.07)))
        c = min(0.9, max(0.02, 0.8 * c + 0.2 * (0.35 + 0.2 * math.sin(2 * math.pi * (hod - 14) / 24))
                         + rng.gauss(0, 0.06)))
        o = min(0.95, max(0.05, 0.9 * o + 0.1 * 0.5 + rng.gauss(0, 0.05)))
        sun = max(0.0, math.sin(math.pi * (hod - 6.5) / 13)) if 6.5 < hod < 19.5 else 0.0
        cloud = 0.75 + 0.25 * rng.random()
        wind.append(round(w, 3))
        coastal.append(round(c, 3))
        solar.append(round(0.92 * sun * cloud, 3))
        offshore.append(round(o, 3))
    return demand, {"wind": wind, "wind_coastal": coastal, "solar": solar,
                    "offshore_wind": offshore}


def scenario(mip_gap):
    return {
        "system": {"nse_penalty_usd_per_mwh": 9000, "hour_weight": None},
        "study_plant": {"resource": "ccgt_ccs", "capacity_mw": 500},
        "flex_bounds": {
            "inflexible": {"min_load": 0.7, "ramp_rate": 0.36, "min_up_h": 12, "min_down_h": 18,
                           "startup_usd_per_mw": 159, "startup_fuel_mmbtu_per_mw": 2.0},
            "flexible": {"min_load": 0.3, "ramp_rate": 1.0, "min_up_h": 4, "min_down_h": 4,
                         "startup_usd_per_mw": 106, "startup_fuel_mmbtu_per_mw": 2.0},
        },
        "policies": [
            {"name": "tax200", "carbon_tax_usd_per_t": 200, "nuclear_no_retire": True},
            {"name": "ces90_45q", "ces_fraction": 0.9, "capture_credit_usd_per_t": 85,
             "nuclear_no_retire": True},
        ],
        "finance": {"wacc": 0.065, "lifetime_yr": {}},
        "solver": {"backend": "internal", "mip_gap": mip_gap, "time_limit_s": 600},
        "sweep": {"combos": "all", "workers": 1, "stage_c_fixed_others": False},
    }


def write(dirname, hours, mip_gap):
    d = Path(dirname)
    d.mkdir(parents=True, exist_ok=True)
    demand, profiles = traces(hours, seed=2201)
    with open(d / "demand.csv", "w", newline="\n") as f:
        f.write("hour,load_mw\n")
        for h, v in enumerate(demand, 1):
            f.write(f"{h},{v}\n")
    with open(d / "profiles.csv", "w", newline="\n") as f:
        f.write("hour,resource,availability\n")
        for name in sorted(profiles):
            for h, v in enumerate(profiles[name], 1):
                f.write(f"{h},{name},{v}\n")
    with open(d / "resources.csv", "w", newline="\n") as f:
        f.write(",".join(COLUMNS) + "\n")
        for row in resources():
            f.write(",".join(row) + "\n")
    with open(d / "scenario.json", "w", newline="\n") as f:
        json.dump(scenario(mip_gap), f, indent=2)
        f.write("\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default=str(Path(__file__).resolve().parent.parent / "examples"))
    args = ap.parse_args()
    write(Path(args.root) / "texas-toy", 48, 1e-9)
    write(Path(args.root) / "texas-toy-336", 336, 1e-3)


if __name__ == "__main__":
    main()
