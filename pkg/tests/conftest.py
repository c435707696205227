"""Shared fixtures and the random circuit generator."""

from __future__ import annotations

import math
import random

from fewphoton.circuit import BS, MIRROR, PHASE, Circuit, Element, Terminal, validate


def random_circuit(seed: int, max_elements: int = 6) -> Circuit:
    """A random valid two-input network, deterministic in ``seed``.

    The first element is always a beam splitter fed by both inputs, so
    every photon can reach a terminal; later elements grab loose wires
    at random and whatever remains open becomes a terminal.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_elements)
    elements = [Element("e0", BS, rng.choice([0.5, rng.random(), rng.random()]))]
    wires: dict[str, str] = {}
    inputs = {"L": "e0:in0", "R": "e0:in1"}
    loose = ["e0:out0", "e0:out1"]

    for k in range(1, n):
        kind = rng.choice([BS, BS, BS, MIRROR, PHASE])
        if kind == BS:
            el = Element(f"e{k}", BS, rng.choice([0.5, rng.random()]))
        elif kind == MIRROR:
            el = Element(f"e{k}", MIRROR)
        else:
            el = Element(f"e{k}", PHASE, phase=rng.uniform(0.0, 2.0 * math.pi))
        elements.append(el)
        ports = el.in_ports()
        # always feed the first input port so the element is reachable
        rng.shuffle(loose)
        wires[loose.pop()] = ports[0]
        if len(ports) > 1 and loose and rng.random() < 0.6:
            wires[loose.pop()] = ports[1]
        loose.extend(el.out_ports())

    terminals = {}
    n_detectors = 0
    for i, port in enumerate(sorted(loose)):
        make_loss = rng.random() < 0.2 and n_detectors + (len(loose) - i) > 1
        if make_loss:
            terminals[f"loss{i}"] = Terminal(port, "loss")
        else:
            terminals[f"D{i}"] = Terminal(port, "detector")
            n_detectors += 1
    circuit = Circuit(elements, wires, inputs, terminals)
    validate(circuit).raise_if_invalid()
    return circuit
