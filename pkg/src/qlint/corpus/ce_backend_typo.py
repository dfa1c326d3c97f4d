backend = Aer.get_backend("qsam_simulator")
qc = QuantumCircuit(1)
qc.h(0)
qc.measure_all()
