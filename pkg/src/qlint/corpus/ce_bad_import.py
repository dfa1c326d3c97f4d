from qiskit import QuantumCircuit, QuantumCircuits

qc = QuantumCircuit(1)
qc.h(0)
