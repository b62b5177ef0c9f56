"""
Characteristic equations of the linearized models
=================================================

Deviations from the vacuum behave like exp(i Omega t).  Tracking the complex
frequency Omega as the coupling grows shows the decay rate (Im Omega)
shrinking until, at a threshold q0^2, the root pair lands on the real axis.
That threshold sits above the measured critical coupling for both models --
the linearization is only qualitative near the transition.
"""

from stringkink.spectral import CharModel, continue_root, find_q0

for model, label in ((CharModel.FERM1, "single equation"), (CharModel.FERM2, "system")):
    print(f"{label} ({model.value}):")
    for q2 in (0.0, 0.3, 0.96, 1.5):
        root = continue_root(model, q2)
        print(
            f"   q^2 = {q2:4.2f}: Omega = {root.omega_re:8.5f} + {root.omega_im:8.5f} i"
            f"   |residual| = {root.residual_abs:.1e}"
        )
    q0, omega0 = find_q0(model)
    print(f"   real-root threshold: q0^2 = {q0:.4f} at Omega = {omega0:.4f}\n")
