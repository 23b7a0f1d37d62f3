import math

#: Willmore energy of any round sphere.
SPHERE_WILLMORE = 4.0 * math.pi
#: Isoperimetric ratio area / volume**(2/3) of any round sphere.
SPHERE_ISOPERIMETRIC = (6.0 * math.sqrt(math.pi)) ** (2.0 / 3.0)
#: Volume of the unit ball.
UNIT_BALL_VOLUME = 4.0 * math.pi / 3.0
