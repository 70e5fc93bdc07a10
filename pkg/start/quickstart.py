import logging

from dmcount.config import configure_logging, load_engine_config
from dmcount.services.abelian import GroupType
from dmcount.services.formulas import census_for, diamond_classes, dm
from dmcount.utils.spec_parser import format_group_type, parse_group_spec

# --------------------------------------------------------------
# Load configuration
# --------------------------------------------------------------

configure_logging("INFO")
config = load_engine_config()

# --------------------------------------------------------------
# dm of a few groups
# --------------------------------------------------------------

for spec in ["Z2^2 x Z3^2", "Z4xZ8", "Z2^4"]:
    result = dm(parse_group_spec(spec), config)
    print(f"dm({spec}) = {result.value} via {result.method.value}")

# --------------------------------------------------------------
# The four section classes of Z2 x Z4^3
# --------------------------------------------------------------

G = GroupType.of({2: (1, 2, 2, 2)})
total = 0
for c in diamond_classes(census_for(G.components[0], config)):
    print(f"{format_group_type(c.section):>12}  {c.sections:>5} x {c.per_section:>5} = {c.subtotal}")
    total += c.subtotal
logging.info(f"Sum over classes: {total}")
print(f"dm({format_group_type(G)}) = {total}")
