#!/usr/bin/env python3
"""Sums the demo plan item by item from catalog prices (price x quantity),
ignoring the unit costs written in the plan, and writes expected_total.json."""
import json
import pathlib

here = pathlib.Path(__file__).parent
prices = {}
for path in sorted((here / "catalog").glob("*.jsonl")):
    for line in path.read_text().splitlines():
        if line.strip():
            rec = json.loads(line)
            prices[(rec["id"], rec["kind"])] = rec["attributes"]["price"]

plan = json.loads((here / "plan.json").read_text())
rows = []
for day in plan["days"]:
    for item in day["items"]:
        price = prices[(item["poi_id"], item["kind"])]
        rows.append({"date": day["date"], "poi_id": item["poi_id"], "price": price,
                     "quantity": item["quantity"], "subtotal": price * item["quantity"]})
total = sum(r["subtotal"] for r in rows)
(here / "expected_total.json").write_text(json.dumps({"total_cost": total, "items": rows}, indent=2) + "\n")
print(total)
