import os

# extra self-checks inside the linear algebra layer; must be set before import
os.environ.setdefault("BSROOTS_CHECK", "1")
