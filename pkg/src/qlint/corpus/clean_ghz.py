from qiskit import QuantumCircuit


def build_ghz(width):
    qc = QuantumCircuit(width, width)
    qc.h(0)
    for target in range(1, width):
        qc.cx(0, target)
    qc.measure(range(width), range(width))
    return qc


circuit = build_ghz(4)
print(circuit.depth())
