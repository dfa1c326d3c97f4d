from qiskit import QuantumCircuit, Aer

qc = QuantumCircuit(2, 2)
qc.h(0)
qc.h(1)
qc.measure([0, 1], [0, 1])
backend = Aer.get_backend("qasm_simulator")
counts = backend.run(qc, shots=100).result().get_counts()
print(counts)
