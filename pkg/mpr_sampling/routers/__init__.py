"""Router package for the FastAPI application.

Each module groups the endpoints of one part of the library: source
analysis, policy optimisation and simulation.  Routers are registered
in ``main.py``.
"""
