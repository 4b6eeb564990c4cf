namespace Game.Combat;

public static class CombatRng { }
