"""Static bit tables for the short TMVP kernels and the 4-, 8- and 11-point
cyclic convolution algorithms.

Rows are stored exactly as written in the source tables.  Where a table is
given transposed (marked ``_T``) the consumer transposes it.  Each tuple
is (post, r-side pre, v-side pre) for TMVP kernels, and (Q, R, P) for
convolutions.
"""

# -- Toeplitz kernels: u = post (pre_r r * pre_v v) ------------------------

TMVP2_POST = ("101", "011")
TMVP2_PRE_R = ("011", "110", "010")
TMVP2_PRE_V = ("01", "10", "11")

TMVP3_POST_T = ("100", "010", "001", "110", "101", "011")
TMVP3_PRE_R = ("00111", "01110", "11100", "00010", "00100", "01000")
TMVP3_PRE_V = ("001", "010", "100", "011", "101", "110")

# The n=5 tables are labelled E, G, H in the source but their shapes only
# fit the roles below: 14x9 acts on r (2n-1 = 9), 14x5 on v, 5x14 is post.
TMVP5_PRE_R = (
    "111110000",
    "011111000",
    "001111100",
    "000111110",
    "000011111",
    "010010000",
    "001000000",
    "000110000",
    "000100000",
    "000011000",
    "000001000",
    "000000100",
    "000010010",
    "000010000",
)
TMVP5_PRE_V = (
    "10000",
    "01000",
    "00100",
    "00010",
    "00001",
    "11000",
    "10100",
    "10010",
    "01100",
    "01001",
    "00110",
    "00101",
    "00011",
    "11011",
)
TMVP5_POST = (
    "00001000010111",
    "00010001001011",
    "00100010101100",
    "01000100110001",
    "10000111000001",
)

# -- cyclic convolutions: z = Q (R b * P a) --------------------------------

CONV4_Q = (
    "111100000",
    "110011110",
    "111111000",
    "110000111",
)
CONV4_R = (
    "1100",
    "1111",
    "1010",
    "0100",
    "1111",
    "0101",
    "0101",
    "0010",
    "1111",
)
CONV4_P = (
    "1010",
    "0100",
    "0110",
    "1111",
    "1010",
    "1111",
    "0011",
    "1111",
    "1111",
)

CONV8_Q = (
    "110000110110000000000000110",
    "101000101101000000000000111",
    "110000110000110000000110000",
    "101000101000101000000111000",
    "110110110110000000110000000",
    "101101101101000000111000000",
    "110110110000110110000000000",
    "101101101000101111000000000",
)
CONV8_R_T = (
    "111111111111111111111111111",
    "001001001001011011011011011",
    "000000000000111111111111111",
    "000010010000001011011011011",
    "000111111000000111111111111",
    "000001001010000011011011011",
    "000000000111000111111111111",
    "010010010011010011011011011",
)
CONV8_P_T = (
    "101101000000101101000000000",
    "110110000000110111000000000",
    "101101000101000000101000000",
    "110110000110000000111000000",
    "101101101000101000000101000",
    "110110110000110000000111000",
    "101101101101000000000000101",
    "110110110110000000000000111",
)

CONV11_Q = (
    "1000000000000001111100000000011111000000000",
    "1000010000101110000100001011100000000000000",
    "1000100010010110001000100101100000000000000",
    "1001000101011000010001010110000000000000000",
    "1010001001100010100010011000100000000000000",
    "1100001110000011000011100000100000000000000",
    "1000010000101110000000000000000001000010111",
    "1000100010010110000000000000000010001001011",
    "1001000101011000000000000000000100010101100",
    "1010001001100010000000000000001000100110001",
    "1100001110000010000000000000010000111000001",
)
CONV11_R_T = (
    "1100000101101011111100001100001111000011000",
    "1000001111111101111110101001111111101010011",
    "1000010110011011111000110000011111001100000",
    "1000110001011011110101000000011111010000010",
    "1001111101011011101110000001011111100000100",
    "1011110101011011011100000010011111000011000",
    "1111110101011010111100001100011111101010011",
    "1111110101011011111110101001111110001100000",
    "1111100101011011111100110000011101010000000",
    "1111000101011111111101000001011011100000010",
    "1110000101010011111110000010010111000000100",
)
CONV11_P_T = (
    "1100001110000010000000000000010000111000001",
    "1010001001100010000000000000001000100110001",
    "1001000101011000000000000000000100010101100",
    "1000100010010110000000000000000010001001011",
    "1000010000101110000000000000000001000010111",
    "1100001110000011000011100000100000000000000",
    "1010001001100010100010011000100000000000000",
    "1001000101011000010001010110000000000000000",
    "1000100010010110001000100101100000000000000",
    "1000010000101110000100001011100000000000000",
    "1000000000000001111100000000011111000000000",
)
