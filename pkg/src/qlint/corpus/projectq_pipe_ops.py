eng = MainEngine()
qubits = eng.allocate_qureg(3)
H | qubits[0]
CX | (qubits[0], qubits[2])
eng.flush()
amplitudes = np.array(eng.backend.cheat()[1])
amplitudes = np.abs(amplitudes)
All(Measure) | qubits
