"""Canonical JSON instance format.

    {"nodes":    [{"id": ..., "cpu": ...}, ...],
     "edges":    [{"u": ..., "v": ..., "bw": ...}, ...],
     "requests": [{"shape": "path"|"cycle"|"general",
                   "vns": [{"id": ..., "cpu": ...}, ...],
                   "vls": [{"u": ..., "v": ..., "bw": ...}, ...],
                   "revenue": ...}, ...]}

Quantities may be ints, decimal floats, or "p/q" strings; non-integer values
round-trip exactly as fractions (written back as "p/q").
"""

from __future__ import annotations

import json

from .model import Shape, SubstrateNetwork, VirtualRequest, as_quantity, edge_key


def _q_out(x):
    q = as_quantity(x)
    return q if isinstance(q, int) else str(q)


def instance_to_dict(net, requests):
    return {
        "nodes": [{"id": v, "cpu": _q_out(net.cpu_capacity[v])} for v in net.nodes],
        "edges": [{"u": u, "v": v, "bw": _q_out(net.bw_capacity[(u, v)])}
                  for u, v in net.edges],
        "requests": [request_to_dict(r) for r in requests],
    }


def request_to_dict(req):
    return {
        "shape": req.shape.value,
        "vns": [{"id": v, "cpu": _q_out(req.cpu_demand[v])} for v in req.vns],
        "vls": [{"u": u, "v": v, "bw": _q_out(req.bw_demand[(u, v)])} for u, v in req.vls],
        "revenue": _q_out(req.revenue),
    }


def instance_from_dict(data):
    nodes = [n["id"] for n in data["nodes"]]
    cpu = {n["id"]: as_quantity(n["cpu"]) for n in data["nodes"]}
    edges = [(e["u"], e["v"]) for e in data["edges"]]
    bw = {edge_key(e["u"], e["v"]): as_quantity(e["bw"]) for e in data["edges"]}
    net = SubstrateNetwork(nodes, edges, cpu, bw)
    requests = []
    for i, r in enumerate(data.get("requests", [])):
        requests.append(VirtualRequest(
            req_id=r.get("id", i),
            shape=Shape(r["shape"]),
            vns=[v["id"] for v in r["vns"]],
            vls=[(l["u"], l["v"]) for l in r["vls"]],
            cpu_demand={v["id"]: as_quantity(v["cpu"]) for v in r["vns"]},
            bw_demand={edge_key(l["u"], l["v"]): as_quantity(l["bw"]) for l in r["vls"]},
            revenue=as_quantity(r.get("revenue", 1)),
        ))
    return net, requests


def dump_instance(net, requests, fp):
    json.dump(instance_to_dict(net, requests), fp, indent=2)
    fp.write("\n")


def load_instance(fp):
    return instance_from_dict(json.load(fp))


def embedding_to_dict(req, emb):
    return {
        "request": emb.req_id,
        "nodes": [{"vn": vn, "sn": sn} for vn, sn in emb.node_map.items()],
        "links": [{"u": u, "v": v, "path": [list(e) for e in path]}
                  for (u, v), path in emb.link_map.items()],
        "revenue": _q_out(req.revenue),
    }
