#!/usr/bin/env python3
"""Regenerate parser inventories and golden ABIs for the fixture corpus.

Each tests/fixtures/corpus/<name>.sol is compiled with the newest installed
solc that accepts it. The compiler's own AST and ABI are reduced to what the
tests compare against:

  <name>.inventory.json  declarations of the last contract in the file
  <name>.abi.json        that contract's ABI, limited to entries it declares
                         itself, without public state-variable getters

The staking fixture's abi.golden.json is the compiler ABI rewritten in the
exporter's canonical form: no internalType, sorted keys, declaration order.

Usage: scripts/solc_oracle.py [--solc-dir /opt/solc/bin] [corpus dir]
"""

import argparse
import json
import pathlib
import re
import subprocess
import sys


def compilers(solc_dir):
    found = []
    for exe in pathlib.Path(solc_dir).glob("solc-*"):
        m = re.fullmatch(r"solc-v?(\d+)\.(\d+)\.(\d+)", exe.name)
        if m:
            found.append((tuple(int(g) for g in m.groups()), exe))
    return sorted(found, reverse=True)


def compile_with(exe, source):
    request = {
        "language": "Solidity",
        "sources": {"contract.sol": {"content": source}},
        "settings": {"outputSelection": {"*": {"*": ["abi"], "": ["ast"]}}},
    }
    out = subprocess.run([str(exe), "--standard-json"], input=json.dumps(request),
                         capture_output=True, text=True, timeout=120).stdout
    out = json.loads(out[out.index("{"):])
    errors = [e for e in out.get("errors", []) if e.get("severity") == "error"]
    return out, errors


def function_name(node):
    kind = node.get("kind")
    if kind == "constructor" or node.get("isConstructor"):
        return "constructor"
    if kind == "receive":
        return "receive"
    if kind == "fallback" or not node.get("name"):
        return "fallback"
    return node["name"]


def primary_contract(ast):
    contracts = [n for n in ast["nodes"]
                 if n.get("nodeType") == "ContractDefinition" and n.get("contractKind") == "contract"]
    return contracts[-1]


def inventory(contract, version):
    inv = {"compiler": ".".join(map(str, version)), "contract": contract["name"],
           "bases": [b["baseName"]["name"] for b in contract.get("baseContracts", [])],
           "functions": [], "state_variables": [], "enums": {}, "events": [],
           "modifiers": [], "structs": []}
    for n in contract["nodes"]:
        t = n.get("nodeType")
        if t == "FunctionDefinition":
            inv["functions"].append(function_name(n))
        elif t == "VariableDeclaration":
            inv["state_variables"].append(n["name"])
        elif t == "EnumDefinition":
            inv["enums"][n["name"]] = [m["name"] for m in n["members"]]
        elif t == "EventDefinition":
            inv["events"].append(n["name"])
        elif t == "ModifierDefinition":
            inv["modifiers"].append(n["name"])
        elif t == "StructDefinition":
            inv["structs"].append(n["name"])
    return inv


def own_abi(abi, inv):
    declared = set(inv["functions"])
    events = set(inv["events"])
    out = []
    for entry in abi:
        kind = entry.get("type", "function")
        if kind == "function" and entry["name"] in declared:
            out.append(entry)
        elif kind == "event" and entry["name"] in events:
            out.append(entry)
        elif kind in ("constructor", "fallback", "receive") and kind in declared:
            out.append(entry)
    return out


def staking_golden(exe, fixture_dir):
    path = fixture_dir / "Staking.sol"
    source = path.read_text()
    out, errors = compile_with(exe, source)
    if errors:
        sys.exit(f"{path}: {errors[0]['formattedMessage']}")
    contract = primary_contract(out["sources"]["contract.sol"]["ast"])
    inv = inventory(contract, (0, 0, 0))
    abi = own_abi(out["contracts"]["contract.sol"][contract["name"]]["abi"], inv)
    for entry in abi:
        for key in ("inputs", "outputs"):
            for p in entry.get(key, []):
                p.pop("internalType", None)
    abi.sort(key=lambda e: re.search(r"\b(event|function)\s+" + e["name"] + r"\b", source).start())
    (fixture_dir / "abi.golden.json").write_text(json.dumps(abi, indent=2, sort_keys=True))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--solc-dir", default="/opt/solc/bin")
    ap.add_argument("corpus", nargs="?", default=pathlib.Path(__file__).parent.parent / "tests/fixtures/corpus")
    args = ap.parse_args()
    installed = compilers(args.solc_dir)
    if not installed:
        sys.exit("no solc-X.Y.Z executables in " + args.solc_dir)
    for path in sorted(pathlib.Path(args.corpus).glob("*.sol")):
        source = path.read_text()
        for version, exe in installed:
            out, errors = compile_with(exe, source)
            if not errors:
                break
        else:
            sys.exit(f"{path.name}: no installed compiler accepts it: {errors[0]['formattedMessage']}")
        contract = primary_contract(out["sources"]["contract.sol"]["ast"])
        inv = inventory(contract, version)
        abi = own_abi(out["contracts"]["contract.sol"][contract["name"]]["abi"], inv)
        path.with_suffix(".inventory.json").write_text(json.dumps(inv, indent=2) + "\n")
        path.with_suffix(".abi.json").write_text(json.dumps(abi, indent=2) + "\n")
        print(f"{path.name}: solc {inv['compiler']}, {contract['name']}, {len(inv['functions'])} functions")
    staking_golden(installed[0][1], pathlib.Path(args.corpus).parent / "staking")


if __name__ == "__main__":
    main()
