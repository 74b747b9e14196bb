import os
import sys

# make the wrapper package importable when running from the source tree
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
