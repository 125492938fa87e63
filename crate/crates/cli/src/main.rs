fn main() {
    // placeholder until the command surface lands
}
